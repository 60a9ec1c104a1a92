//! Expression trees for the identity registry, their s-expression parser,
//! and evaluators over the rational and cyclotomic coefficient rings.
//!
//! Registry entries are data: each identity is a pair of trees over the
//! engine's function zoo. The parser reads one prefix-notation form per
//! node, e.g. `(* 2/3 (q 3) (jac 3 6 27))` for `(2/3) q^3 j(q^3,q^6; q^27)`.
//!
//! ζ-free subtrees of a cyclotomic-ring evaluation are computed over Q and
//! lifted coefficient-wise, which keeps the product-heavy leaves on the
//! cheap rational path.

use crate::bailey;
use crate::number::{parse_rat, Frac, Rat};
use crate::qfunctions as qf;
use crate::ring::{CyclotomicRing, RationalRing, Ring};
use crate::series::{embed_rat_to_cyclo, LaurentSeries, SeriesError};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// Substitute q -> q^k in the subtree.
    QPow(i64, Box<Expr>),
    /// Rational constant.
    Rational(Rat),
    /// ζ^k (cyclotomic rings only).
    Zeta(i64),
    /// q^e.
    QMono(i64),
    /// Product of `j(q^g; q^base)` over the listed residues.
    Jac(Vec<i64>, i64),
    /// `(q^g; q^base)_n`; `None` order means the infinite product.
    Poch(i64, i64, Option<i64>),
    /// `(q^b; q^b)_inf`.
    Euler(i64),
    /// `q^{b/24} (q^b; q^b)_inf`.
    Eta(i64),
    /// Generalized eta factor with prefactor `q^{P(g/delta) delta/2}`.
    GEta(i64, i64),
    S(i64, i64, i64),
    T(i64, i64, i64),
    SStar(i64, i64),
    TStar(i64, i64),
    U(i64, i64, i64),
    V(i64, i64, i64),
    G(i64, i64),
    H(i64, i64),
    /// g expanded purely into products (EqG route), argument `g(q^{l a}; q^{3 l^2})`.
    GProd(i64, i64),
    HProd(i64, i64),
    VChi1(i64),
    /// The crank generating function at z = ζ_l.
    Crank(i64),
    /// The U/V bracket of `PP_i(ζ_l, q)` (bilateral sums as U/V data).
    PpBracket(u8, i64),
    /// The bilateral sums of `PP_i(ζ_l, q)` computed directly.
    PpSums(u8, i64),
    /// `PP_i(ζ_l, q)` via bracket/(q;q)_inf - crank/((1-ζ)(1-ζ^{-1})).
    PpUv(u8, i64),
    /// `PP_i(ζ_l, q)` via the symbolic-z route evaluated at the root.
    PpDirect(u8, i64),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn add(terms: Vec<Expr>) -> Expr {
        Expr::Add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        Expr::Mul(factors)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, k: i64) -> Expr {
        Expr::Pow(Box::new(a), k)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rational(RationalRing.from_i64(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::Rational(crate::number::rat(n, d))
    }

    /// Does the subtree force evaluation over a cyclotomic ring?
    pub fn uses_root_of_unity(&self) -> bool {
        match self {
            Expr::Zeta(_)
            | Expr::Crank(_)
            | Expr::PpBracket(..)
            | Expr::PpSums(..)
            | Expr::PpUv(..)
            | Expr::PpDirect(..) => true,
            Expr::Add(v) | Expr::Mul(v) => v.iter().any(|e| e.uses_root_of_unity()),
            Expr::Sub(a, b) | Expr::Div(a, b) => {
                a.uses_root_of_unity() || b.uses_root_of_unity()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::QPow(_, a) => a.uses_root_of_unity(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    Series(SeriesError),
    Q(qf::QError),
    Bailey(String),
    Parse(String),
    /// ζ or a root-of-unity construction in a rational-ring evaluation.
    RingContext(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Series(e) => write!(f, "{}", e),
            EvalError::Q(e) => write!(f, "{}", e),
            EvalError::Bailey(e) => write!(f, "{}", e),
            EvalError::Parse(e) => write!(f, "parse error: {}", e),
            EvalError::RingContext(e) => write!(f, "ring context: {}", e),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<SeriesError> for EvalError {
    fn from(e: SeriesError) -> Self {
        EvalError::Series(e)
    }
}

impl From<qf::QError> for EvalError {
    fn from(e: qf::QError) -> Self {
        EvalError::Q(e)
    }
}

impl From<bailey::BaileyError> for EvalError {
    fn from(e: bailey::BaileyError) -> Self {
        EvalError::Bailey(e.to_string())
    }
}

type EvalResult<R> = Result<LaurentSeries<R>, EvalError>;

/// Evaluator over Q with leaf and inverse caching.
pub struct RationalEvaluator {
    cache: HashMap<(Expr, i64), LaurentSeries<RationalRing>>,
    inv_cache: HashMap<(Expr, i64), LaurentSeries<RationalRing>>,
}

impl Default for RationalEvaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalEvaluator {
    pub fn new() -> Self {
        RationalEvaluator {
            cache: HashMap::new(),
            inv_cache: HashMap::new(),
        }
    }

    pub fn eval(&mut self, e: &Expr, depth: i64) -> EvalResult<RationalRing> {
        if let Some(hit) = self.cache.get(&(e.clone(), depth)) {
            return Ok(hit.clone());
        }
        let ring = RationalRing;
        let value = match e {
            Expr::Add(terms) => {
                let mut acc = LaurentSeries::zero(ring, Frac::from_int(depth));
                for t in terms {
                    acc = acc.add(&self.eval(t, depth)?)?;
                }
                acc
            }
            Expr::Sub(a, b) => self.eval(a, depth)?.sub(&self.eval(b, depth)?)?,
            Expr::Neg(a) => self.eval(a, depth)?.neg(),
            Expr::Mul(factors) => {
                // exact scalar-monomial factors shift exponents without
                // capping the truncation order of the series factors
                let mut scalar = ring.one();
                let mut shift = Frac::ZERO;
                let mut parts = Vec::with_capacity(factors.len());
                for f in factors {
                    match f {
                        Expr::QMono(e) => shift = shift + Frac::from_int(*e),
                        Expr::Rational(r) => scalar = &scalar * r,
                        _ => parts.push(self.eval(f, depth)?),
                    }
                }
                parts.sort_by_key(|s| s.iter_nonzero().count());
                let mut acc = LaurentSeries::one(ring, Frac::from_int(depth));
                for p in parts {
                    acc = acc.mul(&p)?;
                }
                acc.monomial_mul(&scalar, shift)
            }
            Expr::Div(a, b) => {
                let num = self.eval(a, depth)?;
                let den_inv = self.eval_inv(b, depth)?;
                num.mul(&den_inv)?
            }
            Expr::Pow(a, k) => {
                if *k >= 0 {
                    self.eval(a, depth)?.pow(*k)?
                } else {
                    self.eval_inv(a, depth)?.pow(-k)?
                }
            }
            Expr::QPow(k, a) => {
                let inner_depth = (depth + k - 1).div_euclid(*k);
                self.eval(a, inner_depth)?.substitute_q_power(*k)
            }
            Expr::Rational(r) => {
                LaurentSeries::monomial(ring, r.clone(), Frac::ZERO, Frac::from_int(depth))
            }
            Expr::Zeta(_) => {
                return Err(EvalError::RingContext(
                    "zeta constant outside a cyclotomic ring".into(),
                ))
            }
            // a monomial is exact, so it may claim order past its exponent
            Expr::QMono(e) => LaurentSeries::monomial(
                ring,
                Rat::from_integer(1.into()),
                Frac::from_int(*e),
                Frac::from_int(depth.max(e + 1)),
            ),
            Expr::Jac(gs, base) => {
                let mut acc = LaurentSeries::one(ring, Frac::from_int(depth));
                for &g in gs {
                    acc = acc.mul(&qf::jacprod(g, *base, depth)?)?;
                }
                acc
            }
            Expr::Poch(g, base, n) => match n {
                Some(order) => {
                    qf::aqprod_finite(&ring, &ring.one(), *g, *base, *order, depth)
                }
                None => qf::aqprod_infinite(&ring, &ring.one(), *g, *base, depth)?,
            },
            Expr::Euler(b) => qf::euler_product(&ring, *b, depth),
            Expr::Eta(b) => qf::eta_series(*b, depth),
            Expr::GEta(delta, g) => qf::generalized_eta(*delta, *g, depth)?,
            Expr::S(a, b, c) => qf::lambert_s(*a, *b, *c, depth)?,
            Expr::T(a, b, c) => qf::lambert_t(*a, *b, *c, depth)?,
            Expr::SStar(b, c) => qf::lambert_s_star(*b, *c, depth)?,
            Expr::TStar(b, c) => qf::lambert_t_star(*b, *c, depth)?,
            Expr::U(a, l, b) => qf::lambert_u(*a, *l, *b, depth)?,
            Expr::V(a, l, b) => qf::lambert_v(*a, *l, *b, depth)?,
            Expr::G(s, c) => qf::g_series(*s, *c, depth)?,
            Expr::H(s, c) => qf::h_series(*s, *c, depth)?,
            Expr::GProd(l, a) => qf::g_product_expansion(*l, *a, depth)?,
            Expr::HProd(l, a) => qf::h_product_expansion(*l, *a, depth)?,
            Expr::VChi1(scale) => qf::v_chi1(*scale, depth),
            Expr::Crank(_)
            | Expr::PpBracket(..)
            | Expr::PpSums(..)
            | Expr::PpUv(..)
            | Expr::PpDirect(..) => {
                return Err(EvalError::RingContext(
                    "root-of-unity series outside a cyclotomic ring".into(),
                ))
            }
        };
        // cache leaves only; composite nodes are cheap to re-fold
        if is_cacheable_leaf(e) {
            self.cache.insert((e.clone(), depth), value.clone());
        }
        Ok(value)
    }

    fn eval_inv(&mut self, e: &Expr, depth: i64) -> EvalResult<RationalRing> {
        if let Some(hit) = self.inv_cache.get(&(e.clone(), depth)) {
            return Ok(hit.clone());
        }
        let value = self.eval(e, depth)?.invert()?;
        self.inv_cache.insert((e.clone(), depth), value.clone());
        Ok(value)
    }
}

fn is_cacheable_leaf(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Jac(..)
            | Expr::Poch(..)
            | Expr::Euler(_)
            | Expr::Eta(_)
            | Expr::GEta(..)
            | Expr::S(..)
            | Expr::T(..)
            | Expr::SStar(..)
            | Expr::TStar(..)
            | Expr::U(..)
            | Expr::V(..)
            | Expr::G(..)
            | Expr::H(..)
            | Expr::GProd(..)
            | Expr::HProd(..)
            | Expr::VChi1(_)
            | Expr::Crank(_)
            | Expr::PpBracket(..)
            | Expr::PpSums(..)
            | Expr::PpUv(..)
            | Expr::PpDirect(..)
    )
}

/// Evaluator over Q(ζ_l); ζ-free subtrees are computed over Q and lifted.
pub struct CyclotomicEvaluator {
    ring: CyclotomicRing,
    rational: RationalEvaluator,
    cache: HashMap<(Expr, i64), LaurentSeries<CyclotomicRing>>,
    inv_cache: HashMap<(Expr, i64), LaurentSeries<CyclotomicRing>>,
}

impl CyclotomicEvaluator {
    pub fn new(ring: CyclotomicRing) -> Self {
        CyclotomicEvaluator {
            ring,
            rational: RationalEvaluator::new(),
            cache: HashMap::new(),
            inv_cache: HashMap::new(),
        }
    }

    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn eval(&mut self, e: &Expr, depth: i64) -> EvalResult<CyclotomicRing> {
        if !e.uses_root_of_unity() {
            let rational = self.rational.eval(e, depth)?;
            return Ok(embed_rat_to_cyclo(&rational, &self.ring));
        }
        if let Some(hit) = self.cache.get(&(e.clone(), depth)) {
            return Ok(hit.clone());
        }
        let ring = self.ring.clone();
        let value = match e {
            Expr::Add(terms) => {
                let mut acc = LaurentSeries::zero(ring, Frac::from_int(depth));
                for t in terms {
                    acc = acc.add(&self.eval(t, depth)?)?;
                }
                acc
            }
            Expr::Sub(a, b) => self.eval(a, depth)?.sub(&self.eval(b, depth)?)?,
            Expr::Neg(a) => self.eval(a, depth)?.neg(),
            Expr::Mul(factors) => {
                // exact scalar-monomial factors shift exponents without
                // capping the truncation order of the series factors
                let mut scalar = ring.one();
                let mut shift = Frac::ZERO;
                let mut parts = Vec::with_capacity(factors.len());
                for f in factors {
                    match f {
                        Expr::QMono(e) => shift = shift + Frac::from_int(*e),
                        Expr::Rational(r) => {
                            scalar = ring.mul(
                                &scalar,
                                &ring
                                    .from_rat(r)
                                    .map_err(|e| EvalError::RingContext(e.to_string()))?,
                            )
                        }
                        Expr::Zeta(k) => {
                            let z = ring
                                .zeta_power(*k)
                                .map_err(|e| EvalError::RingContext(e.to_string()))?;
                            scalar = ring.mul(&scalar, &z);
                        }
                        _ => parts.push(self.eval(f, depth)?),
                    }
                }
                parts.sort_by_key(|s| s.iter_nonzero().count());
                let mut acc = LaurentSeries::one(ring, Frac::from_int(depth));
                for p in parts {
                    acc = acc.mul(&p)?;
                }
                acc.monomial_mul(&scalar, shift)
            }
            Expr::Div(a, b) => {
                let num = self.eval(a, depth)?;
                let den_inv = self.eval_inv(b, depth)?;
                num.mul(&den_inv)?
            }
            Expr::Pow(a, k) => {
                if *k >= 0 {
                    self.eval(a, depth)?.pow(*k)?
                } else {
                    self.eval_inv(a, depth)?.pow(-k)?
                }
            }
            Expr::QPow(k, a) => {
                let inner_depth = (depth + k - 1).div_euclid(*k);
                self.eval(a, inner_depth)?.substitute_q_power(*k)
            }
            Expr::Zeta(k) => {
                let c = ring
                    .zeta_power(*k)
                    .map_err(|err| EvalError::RingContext(err.to_string()))?;
                LaurentSeries::monomial(ring, c, Frac::ZERO, Frac::from_int(depth))
            }
            Expr::Crank(l) => {
                self.check_order(*l)?;
                bailey::crank_genfun_at_root(*l, depth)?
            }
            Expr::PpBracket(i, l) => {
                self.check_order(*l)?;
                bailey::pp_bracket(*i, *l, depth)?
            }
            Expr::PpSums(i, l) => {
                self.check_order(*l)?;
                bailey::pp_bilateral_sums(*i, *l, depth)?
            }
            Expr::PpUv(i, l) => {
                self.check_order(*l)?;
                bailey::pp_uv_at_root(*i, *l, depth)?
            }
            Expr::PpDirect(i, l) => {
                self.check_order(*l)?;
                bailey::pp_direct_at_root(*i, *l, depth)?
            }
            // remaining node kinds are zeta-free and handled above
            _ => unreachable!("zeta-free nodes take the rational path"),
        };
        if is_cacheable_leaf(e) {
            self.cache.insert((e.clone(), depth), value.clone());
        }
        Ok(value)
    }

    fn check_order(&self, l: i64) -> Result<(), EvalError> {
        if l != self.ring.order() {
            return Err(EvalError::RingContext(format!(
                "zeta_{} series in a Q(zeta_{}) evaluation",
                l,
                self.ring.order()
            )));
        }
        Ok(())
    }

    fn eval_inv(&mut self, e: &Expr, depth: i64) -> EvalResult<CyclotomicRing> {
        if !e.uses_root_of_unity() {
            let rational = self.rational.eval_inv(e, depth)?;
            return Ok(embed_rat_to_cyclo(&rational, &self.ring));
        }
        if let Some(hit) = self.inv_cache.get(&(e.clone(), depth)) {
            return Ok(hit.clone());
        }
        let value = self.eval(e, depth)?.invert()?;
        self.inv_cache.insert((e.clone(), depth), value.clone());
        Ok(value)
    }
}

// ---------------------------------------------------------------------------
// S-expression parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_comment = false;
    for ch in text.chars() {
        if in_comment {
            if ch == '\n' {
                in_comment = false;
            }
            continue;
        }
        match ch {
            ';' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                in_comment = true;
            }
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn parse_sexprs(tokens: &[String]) -> Result<Vec<SExpr>, EvalError> {
    let mut stack: Vec<Vec<SExpr>> = vec![Vec::new()];
    for tok in tokens {
        match tok.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack
                    .pop()
                    .ok_or_else(|| EvalError::Parse("unbalanced ')'".into()))?;
                let Some(top) = stack.last_mut() else {
                    return Err(EvalError::Parse("unbalanced ')'".into()));
                };
                top.push(SExpr::List(done));
            }
            atom => stack
                .last_mut()
                .expect("stack nonempty")
                .push(SExpr::Atom(atom.to_string())),
        }
    }
    if stack.len() != 1 {
        return Err(EvalError::Parse("unbalanced '('".into()));
    }
    Ok(stack.pop().unwrap())
}

/// Parse a stream of top-level s-expressions.
pub fn parse_forms(text: &str) -> Result<Vec<ParsedForm>, EvalError> {
    let sexprs = parse_sexprs(&tokenize(text))?;
    sexprs.iter().map(ParsedForm::from_sexpr).collect()
}

/// A top-level registry form: a head symbol with raw items.
pub struct ParsedForm {
    pub head: String,
    items: Vec<SExpr>,
}

impl ParsedForm {
    fn from_sexpr(s: &SExpr) -> Result<ParsedForm, EvalError> {
        let SExpr::List(items) = s else {
            return Err(EvalError::Parse("top-level form must be a list".into()));
        };
        let Some(SExpr::Atom(head)) = items.first() else {
            return Err(EvalError::Parse("form must start with a symbol".into()));
        };
        Ok(ParsedForm {
            head: head.clone(),
            items: items[1..].to_vec(),
        })
    }

    /// Fields of a theorem form: `(theorem <id> (ring ..) (depth ..) ... (lhs ..) (rhs ..))`.
    pub fn theorem_fields(&self) -> Result<TheoremFields, EvalError> {
        if self.head != "theorem" {
            return Err(EvalError::Parse(format!(
                "expected a theorem form, got '{}'",
                self.head
            )));
        }
        let Some(SExpr::Atom(id)) = self.items.first() else {
            return Err(EvalError::Parse("theorem needs an id".into()));
        };
        let mut fields = TheoremFields {
            id: id.clone(),
            ring: None,
            depth: None,
            certificate: None,
            tags: Vec::new(),
            lhs: None,
            rhs: None,
        };
        for item in &self.items[1..] {
            let SExpr::List(kv) = item else {
                return Err(EvalError::Parse(format!(
                    "theorem {}: expected (key ...) fields",
                    id
                )));
            };
            let Some(SExpr::Atom(key)) = kv.first() else {
                return Err(EvalError::Parse(format!("theorem {}: bad field", id)));
            };
            match key.as_str() {
                "ring" => {
                    fields.ring = Some(parse_ring(&kv[1..])?);
                }
                "depth" => fields.depth = Some(atom_i64(&kv[1])?),
                "certificate" => fields.certificate = Some(atom_i64(&kv[1])?),
                "tags" => {
                    for t in &kv[1..] {
                        if let SExpr::Atom(a) = t {
                            fields.tags.push(a.clone());
                        }
                    }
                }
                "lhs" => fields.lhs = Some(parse_expr(&kv[1])?),
                "rhs" => fields.rhs = Some(parse_expr(&kv[1])?),
                other => {
                    return Err(EvalError::Parse(format!(
                        "theorem {}: unknown field '{}'",
                        id, other
                    )))
                }
            }
        }
        Ok(fields)
    }
}

pub struct TheoremFields {
    pub id: String,
    pub ring: Option<crate::ring::RingTag>,
    pub depth: Option<i64>,
    pub certificate: Option<i64>,
    pub tags: Vec<String>,
    pub lhs: Option<Expr>,
    pub rhs: Option<Expr>,
}

fn parse_ring(items: &[SExpr]) -> Result<crate::ring::RingTag, EvalError> {
    match items {
        [SExpr::Atom(name)] if name == "rational" => Ok(crate::ring::RingTag::Rational),
        [SExpr::Atom(name)] if name == "integer" => Ok(crate::ring::RingTag::Integer),
        [SExpr::List(inner)] => match inner.as_slice() {
            [SExpr::Atom(name), SExpr::Atom(order)] if name == "cyclotomic" => {
                Ok(crate::ring::RingTag::Cyclotomic(order.parse().map_err(
                    |_| EvalError::Parse(format!("bad cyclotomic order '{}'", order)),
                )?))
            }
            _ => Err(EvalError::Parse("bad ring spec".into())),
        },
        _ => Err(EvalError::Parse("bad ring spec".into())),
    }
}

fn atom_i64(s: &SExpr) -> Result<i64, EvalError> {
    match s {
        SExpr::Atom(a) => a
            .parse()
            .map_err(|_| EvalError::Parse(format!("expected integer, got '{}'", a))),
        SExpr::List(_) => Err(EvalError::Parse("expected integer, got a list".into())),
    }
}

fn parse_expr(s: &SExpr) -> Result<Expr, EvalError> {
    match s {
        SExpr::Atom(a) => parse_rat(a)
            .map(Expr::Rational)
            .ok_or_else(|| EvalError::Parse(format!("unknown atom '{}'", a))),
        SExpr::List(items) => {
            let Some(SExpr::Atom(head)) = items.first() else {
                return Err(EvalError::Parse("expression list needs a head".into()));
            };
            let args = &items[1..];
            let exprs = |args: &[SExpr]| -> Result<Vec<Expr>, EvalError> {
                args.iter().map(parse_expr).collect()
            };
            let ints = |args: &[SExpr]| -> Result<Vec<i64>, EvalError> {
                args.iter().map(atom_i64).collect()
            };
            match head.as_str() {
                "+" => Ok(Expr::Add(exprs(args)?)),
                "-" => {
                    let mut parts = exprs(args)?;
                    if parts.len() < 2 {
                        return Err(EvalError::Parse("(-) needs two or more args".into()));
                    }
                    let first = parts.remove(0);
                    Ok(parts
                        .into_iter()
                        .fold(first, Expr::sub))
                }
                "neg" => {
                    let [a] = &args else {
                        return Err(EvalError::Parse("(neg a)".into()));
                    };
                    Ok(Expr::neg(parse_expr(a)?))
                }
                "*" => Ok(Expr::Mul(exprs(args)?)),
                "/" => {
                    let mut parts = exprs(args)?;
                    if parts.len() != 2 {
                        return Err(EvalError::Parse("(/ a b)".into()));
                    }
                    let b = parts.pop().unwrap();
                    let a = parts.pop().unwrap();
                    Ok(Expr::div(a, b))
                }
                "pow" => {
                    let [a, k] = &args else {
                        return Err(EvalError::Parse("(pow a k)".into()));
                    };
                    Ok(Expr::pow(parse_expr(a)?, atom_i64(k)?))
                }
                "qpow" => {
                    let [k, a] = &args else {
                        return Err(EvalError::Parse("(qpow k a)".into()));
                    };
                    Ok(Expr::QPow(atom_i64(k)?, Box::new(parse_expr(a)?)))
                }
                "q" => Ok(Expr::QMono(atom_i64(one_arg(args, "q")?)?)),
                "zeta" => Ok(Expr::Zeta(atom_i64(one_arg(args, "zeta")?)?)),
                "jac" => {
                    let v = ints(args)?;
                    if v.len() < 2 {
                        return Err(EvalError::Parse("(jac g.. base)".into()));
                    }
                    let (base, gs) = v.split_last().unwrap();
                    Ok(Expr::Jac(gs.to_vec(), *base))
                }
                "poch" => {
                    let v = ints(args)?;
                    let [g, base, n] = v.as_slice() else {
                        return Err(EvalError::Parse("(poch g base n)".into()));
                    };
                    Ok(Expr::Poch(*g, *base, Some(*n)))
                }
                "pochinf" => {
                    let v = ints(args)?;
                    let [g, base] = v.as_slice() else {
                        return Err(EvalError::Parse("(pochinf g base)".into()));
                    };
                    Ok(Expr::Poch(*g, *base, None))
                }
                "euler" => Ok(Expr::Euler(atom_i64(one_arg(args, "euler")?)?)),
                "eta" => Ok(Expr::Eta(atom_i64(one_arg(args, "eta")?)?)),
                "geta" => two_ints(args, "geta").map(|(d, g)| Expr::GEta(d, g)),
                "s" => three_ints(args, "s").map(|(a, b, c)| Expr::S(a, b, c)),
                "t" => three_ints(args, "t").map(|(a, b, c)| Expr::T(a, b, c)),
                "sstar" => two_ints(args, "sstar").map(|(b, c)| Expr::SStar(b, c)),
                "tstar" => two_ints(args, "tstar").map(|(b, c)| Expr::TStar(b, c)),
                "u" => three_ints(args, "u").map(|(a, l, b)| Expr::U(a, l, b)),
                "v" => three_ints(args, "v").map(|(a, l, b)| Expr::V(a, l, b)),
                "g" => two_ints(args, "g").map(|(s, c)| Expr::G(s, c)),
                "h" => two_ints(args, "h").map(|(s, c)| Expr::H(s, c)),
                "gprod" => two_ints(args, "gprod").map(|(l, a)| Expr::GProd(l, a)),
                "hprod" => two_ints(args, "hprod").map(|(l, a)| Expr::HProd(l, a)),
                "vchi1" => Ok(Expr::VChi1(atom_i64(one_arg(args, "vchi1")?)?)),
                "crank" => Ok(Expr::Crank(atom_i64(one_arg(args, "crank")?)?)),
                "ppbracket" => two_ints(args, "ppbracket")
                    .map(|(i, l)| Expr::PpBracket(i as u8, l)),
                "ppsums" => two_ints(args, "ppsums").map(|(i, l)| Expr::PpSums(i as u8, l)),
                "ppuv" => two_ints(args, "ppuv").map(|(i, l)| Expr::PpUv(i as u8, l)),
                "ppdirect" => {
                    two_ints(args, "ppdirect").map(|(i, l)| Expr::PpDirect(i as u8, l))
                }
                other => Err(EvalError::Parse(format!("unknown operator '{}'", other))),
            }
        }
    }
}

fn one_arg<'a>(args: &'a [SExpr], name: &str) -> Result<&'a SExpr, EvalError> {
    match args {
        [a] => Ok(a),
        _ => Err(EvalError::Parse(format!("({} x) takes one argument", name))),
    }
}

fn two_ints(args: &[SExpr], name: &str) -> Result<(i64, i64), EvalError> {
    match args {
        [a, b] => Ok((atom_i64(a)?, atom_i64(b)?)),
        _ => Err(EvalError::Parse(format!(
            "({} a b) takes two integers",
            name
        ))),
    }
}

fn three_ints(args: &[SExpr], name: &str) -> Result<(i64, i64, i64), EvalError> {
    match args {
        [a, b, c] => Ok((atom_i64(a)?, atom_i64(b)?, atom_i64(c)?)),
        _ => Err(EvalError::Parse(format!(
            "({} a b c) takes three integers",
            name
        ))),
    }
}

/// Parse a single expression from text (used by tests and builders).
pub fn parse_expression(text: &str) -> Result<Expr, EvalError> {
    let sexprs = parse_sexprs(&tokenize(text))?;
    match sexprs.as_slice() {
        [single] => parse_expr(single),
        _ => Err(EvalError::Parse("expected exactly one expression".into())),
    }
}
