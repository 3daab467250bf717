//! Polynomial maps in the sense of Eilenberg and MacLane.
//!
//! For a pointed map `f` (`f(0) = 0`) the difference operators are
//! `Δ^0 f = f` and
//!
//! ```text
//! Δ^{k+1} f(m_0, .., m_k, m_{k+1}) = Δ^k f(m_0, .., m_k + m_{k+1})
//!                                   - Δ^k f(m_0, .., m_k)
//!                                   - Δ^k f(m_0, .., m_{k-1}, m_{k+1})
//! ```
//!
//! so `Δ^k` takes `k + 1` arguments. `f` has degree `N` when `N` is the least
//! level with `Δ^N f = 0`: linear maps have degree 1, `n -> n^d` has degree
//! `d`, the zero map has degree 0.
//!
//! Degrees are certified on a finite box: `Δ^N` vanishes on every tuple of
//! points of `{0..B}^r` and `Δ^{N-1}` has an explicit nonzero witness. This is
//! evidence, not proof; the certificate records its own bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::binomial::{int_binom, BinomialRing, RingError};
use crate::lattice::{smith_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("map `{map}` is defined on N^r only; got negative argument {arg:?}")]
    NegativeArgument { map: String, arg: Vec<String> },
    #[error("check needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("no degree <= {max_degree} certified on the box {{0..{box_bound}}}")]
    ExceedsBound { max_degree: u32, box_bound: u32 },
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("not polylinear in block {block}: {sample}")]
    NotPolylinear { block: usize, sample: String },
    #[error("map does not factor through the quotient: {0}")]
    Obstruction(String),
    #[error("ring {ring} cannot evaluate binomials of order {needed}")]
    RingUnsupported { ring: String, needed: u32 },
    #[error("map `{0}` must be defined on Z^r; extend it to the group completion first")]
    RequiresGroupDomain(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl PolyError {
    pub fn code(&self) -> &'static str {
        match self {
            PolyError::ArityMismatch { .. } => "polymap.arity_mismatch",
            PolyError::NegativeArgument { .. } => "polymap.negative_argument",
            PolyError::BudgetExceeded { .. } => "polymap.budget_exceeded",
            PolyError::ExceedsBound { .. } => "polymap.exceeds_bound",
            PolyError::CertificateInvalid(_) => "polymap.certificate_invalid",
            PolyError::NotPolylinear { .. } => "polymap.not_polylinear",
            PolyError::Obstruction(_) => "polymap.obstruction",
            PolyError::RingUnsupported { .. } => "polymap.ring_unsupported",
            PolyError::RequiresGroupDomain(_) => "polymap.requires_group_domain",
            PolyError::Ring(e) => e.code(),
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, PolyError::BudgetExceeded { .. } | PolyError::ExceedsBound { .. })
    }
}

pub type Result<T> = std::result::Result<T, PolyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `N^r`
    Monoid,
    /// `Z^r`
    Group,
}

type EvalFn = Arc<dyn Fn(&[BigInt]) -> Vec<BigInt> + Send + Sync>;

/// An evaluation oracle `N^r -> Z^s` (or `Z^r -> Z^s`), normalized so that
/// `f(0) = 0`.
#[derive(Clone)]
pub struct PointedMap {
    name: String,
    arity_in: usize,
    arity_out: usize,
    domain: Domain,
    eval: EvalFn,
    offset: Vec<BigInt>,
}

impl fmt::Debug for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointedMap")
            .field("name", &self.name)
            .field("arity_in", &self.arity_in)
            .field("arity_out", &self.arity_out)
            .field("domain", &self.domain)
            .finish()
    }
}

impl PointedMap {
    /// Wraps `f`, subtracting `f(0)` from every value.
    ///
    /// # Panics
    /// If `f(0)` does not have `arity_out` coordinates.
    pub fn new<F>(name: impl Into<String>, arity_in: usize, arity_out: usize, domain: Domain, f: F) -> Self
    where
        F: Fn(&[BigInt]) -> Vec<BigInt> + Send + Sync + 'static,
    {
        let offset = f(&vec![BigInt::zero(); arity_in]);
        assert_eq!(offset.len(), arity_out, "oracle output has the wrong arity");
        PointedMap { name: name.into(), arity_in, arity_out, domain, eval: Arc::new(f), offset }
    }

    /// `n -> n^d` on `N`.
    pub fn power(d: u32) -> Self {
        PointedMap::new(format!("pow:{d}"), 1, 1, Domain::Monoid, move |x| vec![x[0].pow(d)])
    }

    /// `x -> c x` on `N^1`.
    pub fn scale(c: i64) -> Self {
        PointedMap::new(format!("scale:{c}"), 1, 1, Domain::Monoid, move |x| vec![&x[0] * c])
    }

    pub fn identity(r: usize) -> Self {
        PointedMap::new(format!("id:{r}"), r, r, Domain::Monoid, |x| x.to_vec())
    }

    /// `(a, b) -> a b`.
    pub fn multiplication() -> Self {
        PointedMap::new("mul", 2, 1, Domain::Monoid, |x| vec![&x[0] * &x[1]])
    }

    /// The constant `c`; after normalization this is the zero map.
    pub fn constant(c: i64) -> Self {
        PointedMap::new(format!("const:{c}"), 1, 1, Domain::Monoid, move |_| vec![BigInt::from(c)])
    }

    pub fn zero(arity_in: usize, arity_out: usize) -> Self {
        PointedMap::new("zero", arity_in, arity_out, Domain::Monoid, move |_| vec![BigInt::zero(); arity_out])
    }

    /// Parses `pow:<d>`, `scale:<c>`, `mul`, `const:<c>`, `id`, `zero`.
    pub fn builtin(name: &str) -> Option<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        match (head, arg) {
            ("pow", Some(d)) => d.parse().ok().map(PointedMap::power),
            ("scale", Some(c)) => c.parse().ok().map(PointedMap::scale),
            ("const", Some(c)) => c.parse().ok().map(PointedMap::constant),
            ("mul", None) => Some(PointedMap::multiplication()),
            ("id", None) => Some(PointedMap::identity(1)),
            ("zero", None) => Some(PointedMap::zero(1, 1)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn eval(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.arity_in {
            return Err(PolyError::ArityMismatch { expected: self.arity_in, got: x.len() });
        }
        if self.domain == Domain::Monoid && x.iter().any(Signed::is_negative) {
            return Err(PolyError::NegativeArgument {
                map: self.name.clone(),
                arg: x.iter().map(ToString::to_string).collect(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_i64(&self, x: &[i64]) -> Result<Vec<BigInt>> {
        self.eval(&x.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    fn eval_unchecked(&self, x: &[BigInt]) -> Vec<BigInt> {
        let raw = (self.eval)(x);
        raw.into_iter().zip(&self.offset).map(|(v, o)| v - o).collect()
    }
}

fn add_points(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `Δ^level f(args)` by the defining recursion (`level + 1` arguments).
pub fn delta(f: &PointedMap, level: usize, args: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    if args.len() != level + 1 {
        return Err(PolyError::ArityMismatch { expected: level + 1, got: args.len() });
    }
    if level == 0 {
        return f.eval(&args[0]);
    }
    let k = level;
    let mut merged = args[..k].to_vec();
    merged[k - 1] = add_points(&args[k - 1], &args[k]);
    let mut rest = args[..k - 1].to_vec();
    rest.push(args[k].clone());
    let a = delta(f, level - 1, &merged)?;
    let b = delta(f, level - 1, &args[..k])?;
    let c = delta(f, level - 1, &rest)?;
    Ok(sub_vec(sub_vec(a, &b), &c))
}

/// Inclusion-exclusion form of `Δ^{args.len()-1} f(args)`:
/// `sum over nonempty S of (-1)^{|args|-|S|} f(sum of S)`.
pub fn cross_effect(f: &PointedMap, args: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let k = args.len();
    let mut total = vec![BigInt::zero(); f.arity_out];
    for mask in 1u64..(1u64 << k) {
        let mut point = vec![BigInt::zero(); f.arity_in];
        for (i, a) in args.iter().enumerate() {
            if mask & (1 << i) != 0 {
                point = add_points(&point, a);
            }
        }
        let v = f.eval(&point)?;
        let negative = (k - mask.count_ones() as usize) % 2 == 1;
        for (t, x) in total.iter_mut().zip(v) {
            if negative {
                *t -= x;
            } else {
                *t += x;
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyOptions {
    pub max_degree: u32,
    pub box_bound: u32,
    /// Upper bound on the number of argument tuples examined.
    pub budget: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_degree: 8, box_bound: 4, budget: 1_000_000 }
    }
}

/// Coefficients `a_k` of `f(x) = sum_k a_k prod_i C(x_i, k_i)`, `|k| <= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceTable {
    arity_in: usize,
    arity_out: usize,
    terms: Vec<(Vec<u32>, Vec<BigInt>)>,
}

impl DifferenceTable {
    /// `a_k = sum_{j <= k} (-1)^{|k|-|j|} prod_i C(k_i, j_i) f(j)`.
    pub fn from_map(f: &PointedMap, degree: u32) -> Result<Self> {
        let indices = multi_indices(f.arity_in, degree);
        let mut cache: HashMap<Vec<u32>, Vec<BigInt>> = HashMap::new();
        let mut terms = Vec::with_capacity(indices.len());
        for k in &indices {
            let mut acc = vec![BigInt::zero(); f.arity_out];
            for j in box_below(k) {
                let value = match cache.get(&j) {
                    Some(v) => v.clone(),
                    None => {
                        let v = f.eval(&j.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())?;
                        cache.insert(j.clone(), v.clone());
                        v
                    }
                };
                let mut weight = BigInt::one();
                for (&ki, &ji) in k.iter().zip(&j) {
                    weight *= int_binom(&BigInt::from(ki), ji);
                }
                let dist: u32 = k.iter().zip(&j).map(|(a, b)| a - b).sum();
                if dist % 2 == 1 {
                    weight = -weight;
                }
                for (a, v) in acc.iter_mut().zip(value) {
                    *a += &weight * v;
                }
            }
            terms.push((k.clone(), acc));
        }
        Ok(DifferenceTable { arity_in: f.arity_in, arity_out: f.arity_out, terms })
    }

    pub fn terms(&self) -> &[(Vec<u32>, Vec<BigInt>)] {
        &self.terms
    }

    pub fn coefficient(&self, k: &[u32]) -> Option<&[BigInt]> {
        self.terms.iter().find(|(i, _)| i == k).map(|(_, v)| v.as_slice())
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    /// Mahler evaluation at any integer point (negative coordinates allowed).
    pub fn eval(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.arity_out];
        let mut binoms: HashMap<(usize, u32), BigInt> = HashMap::new();
        for (k, a) in &self.terms {
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let mut w = BigInt::one();
            for (i, &ki) in k.iter().enumerate() {
                w *= binoms.entry((i, ki)).or_insert_with(|| int_binom(&x[i], ki)).clone();
            }
            for (o, c) in out.iter_mut().zip(a) {
                *o += &w * c;
            }
        }
        out
    }

    /// Evaluation in a binomial ring: `sum_k a_k prod_i binom_R(x_i, k_i)`.
    pub fn eval_in<R: BinomialRing>(&self, ring: &R, x: &[R::Elem]) -> std::result::Result<Vec<R::Elem>, RingError> {
        let mut out = vec![ring.zero(); self.arity_out];
        for (k, a) in &self.terms {
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let mut w = ring.one();
            for (xi, &ki) in x.iter().zip(k) {
                w = ring.mul(&w, &ring.binom(xi, ki)?);
            }
            for (o, c) in out.iter_mut().zip(a) {
                *o = ring.add(o, &ring.scale(c, &w));
            }
        }
        Ok(out)
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .filter(|(_, a)| a.iter().any(|c| !c.is_zero()))
                .map(|(k, a)| json!({"index": k, "value": a.iter().map(big_json).collect::<Vec<_>>()}))
                .collect(),
        )
    }
}

pub(crate) fn big_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

/// Multi-indices of length `r` with total degree `<= n`, graded then lex.
fn multi_indices(r: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=n {
        let mut cur = vec![0u32; r];
        compositions(r, total, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(r: usize, left: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= r {
        if r > 0 {
            cur[r - 1] = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        compositions(r, left - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// All `j` with `0 <= j_i <= k_i`.
fn box_below(k: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &ki in k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ki).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// All points of `{0..b}^r`.
fn box_points(r: usize, b: u32) -> Vec<Vec<i64>> {
    box_below(&vec![b; r]).into_iter().map(|p| p.into_iter().map(i64::from).collect()).collect()
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub args: Vec<Vec<i64>>,
    pub value: Vec<BigInt>,
}

/// Evidence that a map has degree exactly `degree` on the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialCertificate {
    pub degree: u32,
    pub box_bound: u32,
    pub max_degree: u32,
    /// Argument tuples examined (up to permutation, since `Δ^k` is symmetric).
    pub tuples_checked: u64,
    /// Arguments where `Δ^{degree-1}` is nonzero; `None` for degree 0.
    pub witness: Option<Witness>,
    pub table: DifferenceTable,
}

impl PolynomialCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "box": self.box_bound,
            "max_degree": self.max_degree,
            "tuples_checked": self.tuples_checked,
            "coefficients": self.table.to_json(),
            "witness": self.witness.as_ref().map(|w| json!({
                "level": self.degree - 1,
                "args": w.args,
                "value": w.value.iter().map(big_json).collect::<Vec<_>>(),
            })),
        })
    }
}

/// Memoized evaluation on small nonnegative points.
struct Memo<'a> {
    f: &'a PointedMap,
    cache: HashMap<Vec<i64>, Vec<BigInt>>,
}

impl<'a> Memo<'a> {
    fn new(f: &'a PointedMap) -> Self {
        Memo { f, cache: HashMap::new() }
    }

    fn get(&mut self, p: &[i64]) -> Result<&Vec<BigInt>> {
        if !self.cache.contains_key(p) {
            let v = self.f.eval_i64(p)?;
            self.cache.insert(p.to_vec(), v);
        }
        Ok(&self.cache[p])
    }

    fn cross_effect(&mut self, args: &[&Vec<i64>]) -> Result<Vec<BigInt>> {
        let k = args.len();
        let r = self.f.arity_in;
        let mut total = vec![BigInt::zero(); self.f.arity_out];
        let mut point = vec![0i64; r];
        for mask in 1u64..(1u64 << k) {
            point.iter_mut().for_each(|x| *x = 0);
            for (i, a) in args.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (x, y) in point.iter_mut().zip(a.iter()) {
                        *x += y;
                    }
                }
            }
            let negative = (k - mask.count_ones() as usize) % 2 == 1;
            let v = self.get(&point)?;
            for (t, x) in total.iter_mut().zip(v) {
                if negative {
                    *t -= x;
                } else {
                    *t += x;
                }
            }
        }
        Ok(total)
    }
}

/// Least `N <= max_degree` such that `Δ^N f` vanishes on `{0..B}^r`, with a
/// nonzero witness for `Δ^{N-1}` and the Mahler table of `f`.
///
/// `Δ^N` is symmetric in its arguments, so only non-decreasing tuples of box
/// points are examined.
pub fn certify_degree(f: &PointedMap, opts: &CertifyOptions) -> Result<PolynomialCertificate> {
    let points = box_points(f.arity_in, opts.box_bound);
    let p = points.len() as u128;
    let mut memo = Memo::new(f);
    let mut checked: u64 = 0;
    let mut witness: Option<Witness> = None;

    for level in 0..=opts.max_degree {
        let k = level as usize + 1;
        if k > 63 {
            break;
        }
        let needed = binomial_u128(p + k as u128 - 1, k as u128);
        if needed + checked as u128 > opts.budget as u128 {
            return Err(PolyError::BudgetExceeded { needed: needed + checked as u128, budget: opts.budget });
        }
        let mut idx = vec![0usize; k];
        let mut nonzero: Option<Witness> = None;
        loop {
            checked += 1;
            let args: Vec<&Vec<i64>> = idx.iter().map(|&i| &points[i]).collect();
            let v = memo.cross_effect(&args)?;
            if v.iter().any(|x| !x.is_zero()) {
                nonzero = Some(Witness { args: args.into_iter().cloned().collect(), value: v });
                break;
            }
            // next non-decreasing index tuple
            let mut pos = k;
            while pos > 0 && idx[pos - 1] == points.len() - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            let v = idx[pos - 1];
            for slot in idx.iter_mut().skip(pos) {
                *slot = v;
            }
        }
        match nonzero {
            Some(w) => witness = Some(w),
            None => {
                let table = DifferenceTable::from_map(f, level)?;
                verify_reconstruction(f, &table, opts.box_bound)?;
                return Ok(PolynomialCertificate {
                    degree: level,
                    box_bound: opts.box_bound,
                    max_degree: opts.max_degree,
                    tuples_checked: checked,
                    witness: if level == 0 { None } else { witness },
                    table,
                });
            }
        }
    }
    Err(PolyError::ExceedsBound { max_degree: opts.max_degree, box_bound: opts.box_bound })
}

fn verify_reconstruction(f: &PointedMap, table: &DifferenceTable, box_bound: u32) -> Result<()> {
    for pt in box_points(f.arity_in, box_bound) {
        let x: Vec<BigInt> = pt.iter().map(|&v| BigInt::from(v)).collect();
        if table.eval(&x) != f.eval(&x)? {
            return Err(PolyError::CertificateInvalid(format!(
                "Mahler expansion of `{}` disagrees with the map at {pt:?}",
                f.name
            )));
        }
    }
    Ok(())
}

/// A map together with its degree certificate.
#[derive(Clone, Debug)]
pub struct CertifiedMap {
    map: PointedMap,
    certificate: PolynomialCertificate,
}

impl CertifiedMap {
    pub fn certify(map: PointedMap, opts: &CertifyOptions) -> Result<Self> {
        let certificate = certify_degree(&map, opts)?;
        Ok(CertifiedMap { map, certificate })
    }

    pub fn map(&self) -> &PointedMap {
        &self.map
    }

    pub fn certificate(&self) -> &PolynomialCertificate {
        &self.certificate
    }

    pub fn degree(&self) -> u32 {
        self.certificate.degree
    }

    /// The unique polynomial extension to `Z^r`.
    pub fn extension(&self) -> PointedMap {
        let table = self.certificate.table.clone();
        PointedMap::new(
            format!("ext({})", self.map.name),
            self.map.arity_in,
            self.map.arity_out,
            Domain::Group,
            move |x| table.eval(x),
        )
    }
}

/// Extends a certified map on `N^r` to `Z^r` through its Mahler expansion,
/// after re-checking the expansion against `f` on the certificate's box.
pub fn extend_to_groupification(f: &PointedMap, cert: &PolynomialCertificate) -> Result<PointedMap> {
    if cert.table.arity_in != f.arity_in || cert.table.arity_out != f.arity_out {
        return Err(PolyError::CertificateInvalid(format!(
            "certificate is for arity {}->{}, map is {}->{}",
            cert.table.arity_in, cert.table.arity_out, f.arity_in, f.arity_out
        )));
    }
    verify_reconstruction(f, &cert.table, cert.box_bound)?;
    Ok(CertifiedMap { map: f.clone(), certificate: cert.clone() }.extension())
}

/// `g ∘ f`, re-certified with `max_degree = deg f * deg g`.
///
/// `g` is applied through its extension, so negative intermediate values are
/// fine.
pub fn compose(f: &CertifiedMap, g: &CertifiedMap, opts: &CertifyOptions) -> Result<CertifiedMap> {
    if f.map.arity_out != g.map.arity_in {
        return Err(PolyError::ArityMismatch { expected: g.map.arity_in, got: f.map.arity_out });
    }
    let inner = f.map.clone();
    let outer = g.certificate.table.clone();
    let name = format!("{} >> {}", f.map.name, g.map.name);
    let composite = PointedMap::new(name, inner.arity_in, outer.arity_out, inner.domain, move |x| {
        outer.eval(&inner.eval_unchecked(x))
    });
    let bound = f.degree() * g.degree();
    let cert_opts = CertifyOptions { max_degree: bound, ..*opts };
    let out = CertifiedMap::certify(composite, &cert_opts)?;
    debug_assert!(out.degree() <= bound);
    Ok(out)
}

/// Checks that `f` is additive in each block of coordinates (block sizes
/// `blocks`) on the box, then certifies its degree, which is at most the
/// number of blocks.
pub fn check_polylinear(f: &PointedMap, blocks: &[usize], opts: &CertifyOptions) -> Result<PolynomialCertificate> {
    let total: usize = blocks.iter().sum();
    if total != f.arity_in {
        return Err(PolyError::ArityMismatch { expected: f.arity_in, got: total });
    }
    let base_points = box_points(f.arity_in, opts.box_bound);
    let mut start = 0;
    for (block, &len) in blocks.iter().enumerate() {
        let sub = box_points(len, opts.box_bound);
        let needed = (base_points.len() as u128) * (sub.len() as u128).pow(2);
        if needed > opts.budget as u128 {
            return Err(PolyError::BudgetExceeded { needed, budget: opts.budget });
        }
        let with_block = |base: &[i64], v: &[i64]| -> Vec<i64> {
            let mut p = base.to_vec();
            p[start..start + len].copy_from_slice(v);
            p
        };
        for base in &base_points {
            for y in &sub {
                for z in &sub {
                    let yz: Vec<i64> = y.iter().zip(z).map(|(a, b)| a + b).collect();
                    let lhs = f.eval_i64(&with_block(base, &yz))?;
                    let fy = f.eval_i64(&with_block(base, y))?;
                    let fz = f.eval_i64(&with_block(base, z))?;
                    if lhs != add_points(&fy, &fz) {
                        return Err(PolyError::NotPolylinear {
                            block,
                            sample: format!("at {base:?}: f(y+z) != f(y)+f(z) for y={y:?}, z={z:?}"),
                        });
                    }
                }
            }
        }
        start += len;
    }
    let cert = certify_degree(f, &CertifyOptions { max_degree: blocks.len() as u32, ..*opts })?;
    Ok(cert)
}

/// Map induced on `Z^r / <u - v>`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    map: PointedMap,
    smith: SmithForm,
    hypothesis_checks: usize,
}

impl QuotientMap {
    /// Moduli of the quotient's coordinates after reduction, with `0` for a
    /// free coordinate; trivial factors are omitted.
    pub fn invariants(&self) -> Vec<i128> {
        self.smith.invariants.iter().copied().filter(|&d| d != 1).collect()
    }

    pub fn hypothesis_checks(&self) -> usize {
        self.hypothesis_checks
    }

    /// Reduced coordinates of the class of `x`.
    pub fn class_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.smith
            .u
            .iter()
            .zip(&self.smith.invariants)
            .map(|(row, &d)| {
                let y: BigInt = row.iter().zip(x).map(|(&a, xi)| BigInt::from(a) * xi).sum();
                if d > 0 {
                    let d = BigInt::from(d);
                    ((y % &d) + &d) % d
                } else {
                    y
                }
            })
            .collect()
    }

    /// Canonical lift of the class of `x` back to `Z^r`.
    pub fn canonical_lift(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.class_of(x);
        self.smith
            .u_inv
            .iter()
            .map(|row| row.iter().zip(&y).map(|(&a, yi)| BigInt::from(a) * yi).sum())
            .collect()
    }

    pub fn eval(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.map.arity_in {
            return Err(PolyError::ArityMismatch { expected: self.map.arity_in, got: x.len() });
        }
        self.map.eval(&self.canonical_lift(x))
    }
}

/// Factors a map on `Z^r` through `Z^r / <u - v : (u, v) in relations>`
/// after checking `f(m + u) = f(m + v)` for every `m` in `{0..B}^r`.
pub fn factor_through_quotient(f: &PointedMap, relations: &[(Vec<i64>, Vec<i64>)], box_bound: u32) -> Result<QuotientMap> {
    if f.domain != Domain::Group {
        return Err(PolyError::RequiresGroupDomain(f.name.clone()));
    }
    let r = f.arity_in;
    for (u, v) in relations {
        if u.len() != r || v.len() != r {
            return Err(PolyError::ArityMismatch { expected: r, got: u.len().max(v.len()) });
        }
    }
    let mut checks = 0;
    let points = box_points(r, box_bound);
    for (u, v) in relations {
        for m in &points {
            checks += 1;
            let mu: Vec<i64> = m.iter().zip(u).map(|(a, b)| a + b).collect();
            let mv: Vec<i64> = m.iter().zip(v).map(|(a, b)| a + b).collect();
            if f.eval_i64(&mu)? != f.eval_i64(&mv)? {
                return Err(PolyError::Obstruction(format!(
                    "f(m+u) != f(m+v) at m={m:?}, u={u:?}, v={v:?}"
                )));
            }
        }
    }
    let diffs: Vec<Vec<i128>> = relations
        .iter()
        .map(|(u, v)| u.iter().zip(v).map(|(a, b)| i128::from(*a) - i128::from(*b)).collect())
        .collect();
    let q = QuotientMap { map: f.clone(), smith: smith_form(&diffs, r), hypothesis_checks: checks };
    for m in &points {
        let x: Vec<BigInt> = m.iter().map(|&v| BigInt::from(v)).collect();
        if q.eval(&x)? != f.eval(&x)? {
            return Err(PolyError::Obstruction(format!("induced map differs from f at {m:?}")));
        }
    }
    Ok(q)
}

/// `f_R : R^r -> R^s`, the scalar extension of a certified map.
#[derive(Clone, Debug)]
pub struct ScalarExtension<R: BinomialRing> {
    ring: R,
    table: DifferenceTable,
}

impl<R: BinomialRing> ScalarExtension<R> {
    pub fn eval(&self, x: &[R::Elem]) -> Result<Vec<R::Elem>> {
        if x.len() != self.table.arity_in {
            return Err(PolyError::ArityMismatch { expected: self.table.arity_in, got: x.len() });
        }
        Ok(self.table.eval_in(&self.ring, x)?)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

pub fn extend_scalars<R: BinomialRing + Clone>(f: &CertifiedMap, ring: &R) -> Result<ScalarExtension<R>> {
    let needed = f.degree();
    if let Some(limit) = ring.max_binom_order() {
        if limit < needed {
            return Err(PolyError::RingUnsupported { ring: ring.descriptor(), needed });
        }
    }
    Ok(ScalarExtension { ring: ring.clone(), table: f.certificate.table.clone() })
}
