//! Binomial rings: `Z`, `Q`, `Z[1/r]` and truncated `p`-adic integers, each
//! with an exact `binom(x, n) = x(x-1)...(x-n+1)/n!`, plus executable
//! checks of the five binomial-ring axioms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("p-adic precision exhausted: binom needs {needed} guard digits, only {available} left; raise the guard")]
    PrecisionExhausted { needed: u32, available: u32 },
    #[error("`{value}` is not an element of {ring}")]
    NotInRing { value: String, ring: String },
    #[error("cannot parse ring element `{0}`")]
    ParseElement(String),
    #[error("unknown ring descriptor `{0}` (expected z, q, zloc:<r> or zp:<p>:<K>[:<guard>])")]
    UnknownDescriptor(String),
    #[error("invalid ring parameters: {0}")]
    InvalidParameters(String),
}

impl RingError {
    pub fn code(&self) -> &'static str {
        match self {
            RingError::PrecisionExhausted { .. } => "ring.precision_exhausted",
            RingError::NotInRing { .. } => "ring.not_in_ring",
            RingError::ParseElement(_) => "ring.parse_element",
            RingError::UnknownDescriptor(_) => "ring.unknown_descriptor",
            RingError::InvalidParameters(_) => "ring.invalid_parameters",
        }
    }
}

pub type Result<T> = std::result::Result<T, RingError>;

/// A commutative ring with binomial operations `r -> binom(r, n)`.
pub trait BinomialRing {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn descriptor(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn from_integer(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn binom(&self, x: &Self::Elem, n: u32) -> Result<Self::Elem>;
    /// Whether `a` is a canonical element of this ring.
    fn contains(&self, a: &Self::Elem) -> bool;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.from_integer(&BigInt::one())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `n * a` for an integer `n`.
    fn scale(&self, n: &BigInt, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_integer(n), a)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Human-readable form of an element, as reported to users.
    fn render(&self, a: &Self::Elem) -> String {
        a.to_string()
    }

    /// Deterministic elements always included in sampled checks.
    fn fixed_samples(&self) -> Vec<Self::Elem> {
        [0i64, 1, 2, -1, 7].iter().map(|&n| self.from_integer(&BigInt::from(n))).collect()
    }

    /// Largest `n` for which `binom(x, n)` is computable on freshly embedded
    /// elements, if bounded.
    fn max_binom_order(&self) -> Option<u32> {
        None
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || RingError::ParseElement(s.to_string());
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn rational_binom(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..n {
        acc *= x - BigRational::from_integer(BigInt::from(i));
    }
    acc / BigRational::from_integer(factorial(n))
}

/// Binomial coefficient `C(x, k)` for any integer `x` (negative allowed).
pub fn int_binom(x: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
    }
    let (q, r) = num.div_rem(&factorial(k));
    debug_assert!(r.is_zero());
    q
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl BinomialRing for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> String {
        "Z".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_integer(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn binom(&self, x: &BigInt, n: u32) -> Result<BigInt> {
        Ok(int_binom(x, n))
    }
    fn contains(&self, _: &BigInt) -> bool {
        true
    }
    fn parse(&self, s: &str) -> Result<BigInt> {
        let q = parse_rational(s)?;
        if !q.is_integer() {
            return Err(RingError::NotInRing { value: s.into(), ring: self.descriptor() });
        }
        Ok(q.to_integer())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(-60i64..=60))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl BinomialRing for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn binom(&self, x: &BigRational, n: u32) -> Result<BigRational> {
        Ok(rational_binom(x, n))
    }
    fn contains(&self, a: &BigRational) -> bool {
        a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num = rng.gen_range(-40i64..=40);
        let den = rng.gen_range(1i64..=12);
        BigRational::new(num.into(), den.into())
    }
    fn fixed_samples(&self) -> Vec<BigRational> {
        ["0", "1", "2", "-1", "7", "1/2", "-3/4", "5/3"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect()
    }
}

/// `Z[1/r]`: fractions whose denominator has only prime factors of `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localized {
    r: BigInt,
}

impl Localized {
    pub fn new(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(RingError::InvalidParameters(format!("Z[1/{r}] needs r >= 2")));
        }
        Ok(Localized { r: BigInt::from(r) })
    }

    fn denominator_ok(&self, den: &BigInt) -> bool {
        let mut d = den.abs();
        loop {
            let g = d.gcd(&self.r);
            if g.is_one() {
                return d.is_one();
            }
            d /= g;
        }
    }
}

impl BinomialRing for Localized {
    type Elem = BigRational;

    fn descriptor(&self) -> String {
        format!("Z[1/{}]", self.r)
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn binom(&self, x: &BigRational, n: u32) -> Result<BigRational> {
        Ok(rational_binom(x, n))
    }
    fn contains(&self, a: &BigRational) -> bool {
        Rationals.contains(a) && self.denominator_ok(a.denom())
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let q = parse_rational(s)?;
        if !self.contains(&q) {
            return Err(RingError::NotInRing { value: s.into(), ring: self.descriptor() });
        }
        Ok(q)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num = rng.gen_range(-40i64..=40);
        let e = rng.gen_range(0u32..=4);
        BigRational::new(num.into(), self.r.pow(e))
    }
    fn fixed_samples(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> =
            [0i64, 1, 2, -1, 7].iter().map(|&n| BigRational::from_integer(n.into())).collect();
        v.push(BigRational::new(BigInt::one(), self.r.clone()));
        v.push(BigRational::new(BigInt::from(-3), self.r.pow(2)));
        v
    }
}

/// A `p`-adic integer known modulo `p^prec`.
#[derive(Clone, Debug)]
pub struct PAdicInt {
    residue: BigInt,
    prec: u32,
    p: u32,
}

impl PAdicInt {
    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    /// Absolute precision: the element is known modulo `p^prec`.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Residue modulo `p^k` for `k <= prec`.
    pub fn reduce(&self, k: u32) -> BigInt {
        self.residue.mod_floor(&BigInt::from(self.p).pow(k.min(self.prec)))
    }
}

/// Equality modulo the smaller of the two precisions.
impl PartialEq for PAdicInt {
    fn eq(&self, other: &Self) -> bool {
        let k = self.prec.min(other.prec);
        self.p == other.p && self.reduce(k) == other.reduce(k)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.prec)
    }
}

/// `Z_p` truncated to `precision` visible digits, carrying `guard` extra
/// digits so that the divisions inside `binom` stay exact mod `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPAdic {
    p: u32,
    precision: u32,
    guard: u32,
}

impl TruncatedPAdic {
    /// Default guard is `precision + 6`, enough for every `binom(x, n)` with
    /// `n <= 6` nested twice.
    pub fn new(p: u32, precision: u32) -> Result<Self> {
        Self::with_guard(p, precision, precision + 6)
    }

    pub fn with_guard(p: u32, precision: u32, guard: u32) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(RingError::InvalidParameters(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(RingError::InvalidParameters("precision must be positive".into()));
        }
        Ok(TruncatedPAdic { p, precision, guard })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    fn carried(&self) -> u32 {
        self.precision + self.guard
    }

    fn modulus(&self, k: u32) -> BigInt {
        BigInt::from(self.p).pow(k)
    }

    fn make(&self, residue: BigInt, prec: u32) -> PAdicInt {
        PAdicInt { residue: residue.mod_floor(&self.modulus(prec)), prec, p: self.p }
    }

    /// `v_p(n)` for `n != 0`.
    fn valuation(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let mut n = n.abs();
        let mut v = 0;
        while !n.is_zero() && (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    }

    fn factorial_valuation(&self, n: u32) -> u32 {
        let mut v = 0;
        let mut q = n / self.p;
        while q > 0 {
            v += q;
            q /= self.p;
        }
        v
    }

    /// Embeds a rational whose denominator is prime to `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<PAdicInt> {
        let m = self.modulus(self.carried());
        let den = q.denom().mod_floor(&m);
        let inv = den.modinv(&m).ok_or_else(|| RingError::NotInRing {
            value: q.to_string(),
            ring: self.descriptor(),
        })?;
        Ok(self.make(q.numer() * inv, self.carried()))
    }

    /// Reduction to the visible precision.
    pub fn visible(&self, x: &PAdicInt) -> BigInt {
        x.reduce(self.precision)
    }
}

impl BinomialRing for TruncatedPAdic {
    type Elem = PAdicInt;

    fn descriptor(&self) -> String {
        format!("Z_{} mod {}^{} (guard {})", self.p, self.p, self.precision, self.guard)
    }
    fn zero(&self) -> PAdicInt {
        self.make(BigInt::zero(), self.carried())
    }
    fn from_integer(&self, n: &BigInt) -> PAdicInt {
        self.make(n.clone(), self.carried())
    }
    fn add(&self, a: &PAdicInt, b: &PAdicInt) -> PAdicInt {
        self.make(&a.residue + &b.residue, a.prec.min(b.prec))
    }
    fn neg(&self, a: &PAdicInt) -> PAdicInt {
        self.make(-&a.residue, a.prec)
    }
    fn mul(&self, a: &PAdicInt, b: &PAdicInt) -> PAdicInt {
        self.make(&a.residue * &b.residue, a.prec.min(b.prec))
    }
    /// Multiplying by an exact integer `n` gains `v_p(n)` digits.
    fn scale(&self, n: &BigInt, a: &PAdicInt) -> PAdicInt {
        if n.is_zero() {
            return self.zero();
        }
        self.make(n * &a.residue, a.prec + self.valuation(n))
    }
    fn is_zero(&self, a: &PAdicInt) -> bool {
        a.residue.is_zero()
    }
    /// Only the visible digits; guard digits are an implementation detail.
    fn render(&self, a: &PAdicInt) -> String {
        let k = self.precision.min(a.prec);
        format!("{} + O({}^{})", a.reduce(k), self.p, k)
    }
    fn binom(&self, x: &PAdicInt, n: u32) -> Result<PAdicInt> {
        let v = self.factorial_valuation(n);
        if x.prec < self.precision + v {
            return Err(RingError::PrecisionExhausted {
                needed: v,
                available: x.prec.saturating_sub(self.precision),
            });
        }
        let m = self.modulus(x.prec);
        let mut num = BigInt::one();
        for i in 0..n {
            num = (num * (&x.residue - BigInt::from(i))).mod_floor(&m);
        }
        let pv = self.modulus(v);
        let (shifted, rem) = num.div_rem(&pv);
        assert!(rem.is_zero(), "falling factorial not divisible by p^{v}");
        let out_prec = x.prec - v;
        let out_mod = self.modulus(out_prec);
        let unit = (factorial(n) / &pv).mod_floor(&out_mod);
        let inv = unit.modinv(&out_mod).expect("unit part of n! is invertible");
        Ok(self.make(shifted * inv, out_prec))
    }
    fn contains(&self, a: &PAdicInt) -> bool {
        a.p == self.p
            && a.prec >= self.precision
            && !a.residue.is_negative()
            && a.residue < self.modulus(a.prec)
    }
    fn parse(&self, s: &str) -> Result<PAdicInt> {
        self.from_rational(&parse_rational(s)?)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> PAdicInt {
        // carried digits drawn uniformly
        let mut residue = BigInt::zero();
        for _ in 0..self.carried() {
            residue = residue * self.p + rng.gen_range(0..self.p);
        }
        self.make(residue, self.carried())
    }
    fn fixed_samples(&self) -> Vec<PAdicInt> {
        let mut v: Vec<PAdicInt> =
            [0i64, 1, 2, -1, 7].iter().map(|&n| self.from_integer(&BigInt::from(n))).collect();
        v.push(self.from_integer(&BigInt::from(self.p)));
        if self.p != 2 {
            v.push(self.parse("1/2").unwrap());
        }
        v
    }
    fn max_binom_order(&self) -> Option<u32> {
        let mut n = 0;
        while self.factorial_valuation(n + 1) <= self.guard {
            n += 1;
            if n >= 100_000 {
                break;
            }
        }
        Some(n)
    }
}

/// Plain-token ring descriptor: `z`, `q`, `zloc:<r>`, `zp:<p>:<K>[:<guard>]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers,
    Rationals,
    Localized { r: u64 },
    TruncatedPAdic { p: u32, precision: u32, guard: Option<u32> },
}

impl FromStr for RingDescriptor {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || RingError::UnknownDescriptor(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["z"] | ["Z"] => Ok(RingDescriptor::Integers),
            ["q"] | ["Q"] => Ok(RingDescriptor::Rationals),
            ["zloc", r] => Ok(RingDescriptor::Localized { r: num(r)? }),
            ["zp", p, k] => Ok(RingDescriptor::TruncatedPAdic {
                p: num(p)? as u32,
                precision: num(k)? as u32,
                guard: None,
            }),
            ["zp", p, k, g] => Ok(RingDescriptor::TruncatedPAdic {
                p: num(p)? as u32,
                precision: num(k)? as u32,
                guard: Some(num(g)? as u32),
            }),
            _ => Err(bad()),
        }
    }
}

impl RingDescriptor {
    pub fn padic(&self) -> Result<Option<TruncatedPAdic>> {
        match *self {
            RingDescriptor::TruncatedPAdic { p, precision, guard: Some(g) } => {
                TruncatedPAdic::with_guard(p, precision, g).map(Some)
            }
            RingDescriptor::TruncatedPAdic { p, precision, guard: None } => {
                TruncatedPAdic::new(p, precision).map(Some)
            }
            _ => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `binom(a+b, n) = sum_{p+q=n} binom(a,p) binom(b,q)`
    Vandermonde,
    /// `binom(ab, n) = sum_m binom(a,m) sum_{q_1+..+q_m=n, q_i>=1} prod binom(b,q_i)`
    Multiplication,
    /// `binom(a,m) binom(a,n) = sum_k binom(a,m+k) binom(m+k,n) binom(n,k)`
    Product,
    /// `binom(1, n) = 0` for `n >= 2`
    BinomOfOne,
    /// `binom(a,0) = 1`, `binom(a,1) = a`
    Normalization,
}

impl Axiom {
    pub const ALL: [Axiom; 5] =
        [Axiom::Vandermonde, Axiom::Multiplication, Axiom::Product, Axiom::BinomOfOne, Axiom::Normalization];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::Vandermonde => "(i)",
            Axiom::Multiplication => "(ii)",
            Axiom::Product => "(iii)",
            Axiom::BinomOfOne => "(iv)",
            Axiom::Normalization => "(v)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub label: &'static str,
    pub checks: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ring: String,
    pub samples: usize,
    pub seed: u64,
    pub max_order: u32,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn result(&self, axiom: Axiom) -> &AxiomResult {
        self.results.iter().find(|r| r.axiom == axiom).expect("every axiom is reported")
    }
}

/// Bound on `n` and `m` in the sampled axiom checks.
pub const AXIOM_MAX_ORDER: u32 = 6;

struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failure: None }
    }

    fn record(&mut self, outcome: Result<bool>, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if self.failure.is_some() {
            return;
        }
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failure = Some(witness()),
            Err(e) => self.failure = Some(format!("{} -> error: {e}", witness())),
        }
    }
}

fn sample_list<R: BinomialRing>(ring: &R, samples: usize, seed: u64) -> Vec<R::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = ring.fixed_samples();
    v.truncate(samples);
    while v.len() < samples {
        v.push(ring.sample(&mut rng));
    }
    v
}

/// Runs all five axioms on `samples` seeded elements `a`, paired with a
/// shifted copy of the list for `b`, for every `m, n <= 6`.
pub fn axiom_suite<R: BinomialRing>(ring: &R, samples: usize, seed: u64) -> AxiomReport {
    let list = sample_list(ring, samples.max(1), seed);
    let int = |k: u32| ring.from_integer(&BigInt::from(k));
    let top = AXIOM_MAX_ORDER;

    let mut tallies: Vec<Tally> = Axiom::ALL.iter().map(|_| Tally::new()).collect();
    for (i, a) in list.iter().enumerate() {
        let b = &list[(i * 7 + 3) % list.len()];
        for n in 0..=top {
            tallies[0].record(check_vandermonde(ring, a, b, n), || format!("a={a}, b={b}, n={n}"));
            tallies[1].record(check_multiplication(ring, a, b, n), || format!("a={a}, b={b}, n={n}"));
            for m in 0..=top {
                tallies[2].record(check_product(ring, a, m, n, &int), || format!("a={a}, m={m}, n={n}"));
            }
        }
        tallies[4].record(
            (|| -> Result<bool> { Ok(ring.binom(a, 0)? == ring.one() && ring.binom(a, 1)? == *a) })(),
            || format!("a={a}"),
        );
    }
    for n in 2..=top {
        tallies[3].record(ring.binom(&ring.one(), n).map(|v| ring.is_zero(&v)), || format!("n={n}"));
    }

    let results = Axiom::ALL
        .iter()
        .zip(tallies)
        .map(|(&axiom, t)| AxiomResult {
            axiom,
            label: axiom.label(),
            checks: t.checks,
            passed: t.failure.is_none(),
            counterexample: t.failure,
        })
        .collect();
    AxiomReport { ring: ring.descriptor(), samples: list.len(), seed, max_order: top, results }
}

fn check_vandermonde<R: BinomialRing>(ring: &R, a: &R::Elem, b: &R::Elem, n: u32) -> Result<bool> {
    let lhs = ring.binom(&ring.add(a, b), n)?;
    let mut rhs = ring.zero();
    for p in 0..=n {
        rhs = ring.add(&rhs, &ring.mul(&ring.binom(a, p)?, &ring.binom(b, n - p)?));
    }
    Ok(lhs == rhs)
}

fn check_multiplication<R: BinomialRing>(ring: &R, a: &R::Elem, b: &R::Elem, n: u32) -> Result<bool> {
    let lhs = ring.binom(&ring.mul(a, b), n)?;
    let n = n as usize;
    let bb: Vec<R::Elem> = (0..=n).map(|q| ring.binom(b, q as u32)).collect::<Result<_>>()?;
    // comp[j] = sum over compositions of j into the current number of positive parts
    let mut comp: Vec<R::Elem> = (0..=n).map(|j| if j == 0 { ring.one() } else { ring.zero() }).collect();
    let mut rhs = ring.zero();
    for m in 0..=n {
        rhs = ring.add(&rhs, &ring.mul(&ring.binom(a, m as u32)?, &comp[n]));
        let mut next = vec![ring.zero(); n + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            for q in 1..=j {
                *slot = ring.add(slot, &ring.mul(&bb[q], &comp[j - q]));
            }
        }
        comp = next;
    }
    Ok(lhs == rhs)
}

fn check_product<R: BinomialRing>(
    ring: &R,
    a: &R::Elem,
    m: u32,
    n: u32,
    int: &impl Fn(u32) -> R::Elem,
) -> Result<bool> {
    let lhs = ring.mul(&ring.binom(a, m)?, &ring.binom(a, n)?);
    let mut rhs = ring.zero();
    for k in 0..=n {
        let term = ring.mul(
            &ring.binom(a, m + k)?,
            &ring.mul(&ring.binom(&int(m + k), n)?, &ring.binom(&int(n), k)?),
        );
        rhs = ring.add(&rhs, &term);
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SanityReport {
    pub ring: String,
    pub torsion_free: bool,
    pub closed: bool,
    pub witness: Option<String>,
}

impl SanityReport {
    pub fn passed(&self) -> bool {
        self.torsion_free && self.closed
    }
}

/// Samples torsion-freeness (`k * x = 0` only for `x = 0`, `k <= 12`) and
/// closure of `binom(x, n)`, `n <= 6`, in the ring.
pub fn is_binomial_sanity<R: BinomialRing>(ring: &R, seed: u64) -> SanityReport {
    let list = sample_list(ring, 24, seed);
    let mut report =
        SanityReport { ring: ring.descriptor(), torsion_free: true, closed: true, witness: None };
    'torsion: for x in &list {
        if ring.is_zero(x) {
            continue;
        }
        for k in 1..=12u32 {
            if ring.is_zero(&ring.scale(&BigInt::from(k), x)) {
                report.torsion_free = false;
                report.witness = Some(format!("{k} * {x} = 0"));
                break 'torsion;
            }
        }
    }
    'closure: for x in &list {
        for n in 0..=AXIOM_MAX_ORDER {
            match ring.binom(x, n) {
                Ok(v) if ring.contains(&v) => {}
                Ok(v) => {
                    report.closed = false;
                    report.witness.get_or_insert(format!("binom({x}, {n}) = {v} escapes the ring"));
                    break 'closure;
                }
                Err(e) => {
                    report.closed = false;
                    report.witness.get_or_insert(format!("binom({x}, {n}): {e}"));
                    break 'closure;
                }
            }
        }
    }
    report
}

/// Stability of truncated `p`-adic binomials under a change of guard
/// precision: the visible digits must agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuardStability {
    pub guards: (u32, u32),
    pub checks: usize,
    pub stable: bool,
    pub witness: Option<String>,
}

pub fn guard_stability(p: u32, precision: u32, guards: (u32, u32), samples: usize, seed: u64) -> Result<GuardStability> {
    let low = TruncatedPAdic::with_guard(p, precision, guards.0)?;
    let high = TruncatedPAdic::with_guard(p, precision, guards.1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = GuardStability { guards, checks: 0, stable: true, witness: None };
    for _ in 0..samples {
        let num: i64 = rng.gen_range(-10_000..=10_000);
        let mut den: i64 = rng.gen_range(1..=50);
        while den % p as i64 == 0 {
            den += 1;
        }
        let q = BigRational::new(num.into(), den.into());
        let (xl, xh) = (low.from_rational(&q)?, high.from_rational(&q)?);
        for n in 0..=AXIOM_MAX_ORDER {
            out.checks += 1;
            let (a, b) = match (low.binom(&xl, n), high.binom(&xh, n)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            if low.visible(&a) != high.visible(&b) && out.stable {
                out.stable = false;
                out.witness = Some(format!("binom({q}, {n})"));
            }
        }
    }
    Ok(out)
}
