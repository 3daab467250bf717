//! The category `CSA(k)`: objects are central simple algebras up to Brauer
//! data, `Hom(U(A), U(A')) = ind(A^op ⊗ A')·Z`, composition is
//! multiplication.
//!
//! Brauer groups are given as data models: a class group, an index function
//! and declared restriction/corestriction maps between models.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsaError {
    #[error("objects live in different models ({left} vs {right})")]
    ModelMismatch { left: String, right: String },
    #[error("target of the first hom is not the source of the second")]
    NotComposable,
    #[error("value {value} is not a multiple of the generator {generator}")]
    DivisibilityViolation { value: String, generator: u64 },
    #[error("model {from} declares no corestriction from {to}")]
    NoCorestrictionDeclared { from: String, to: String },
    #[error("model {from} declares no restriction to {to}")]
    NoRestrictionDeclared { from: String, to: String },
    #[error("object of degree {degree} has index {index}; a division object is required")]
    NotDivisionObject { index: u64, degree: u64 },
    #[error("extension degree mismatch: link has {declared}, context has {expected}")]
    DegreeMismatch { declared: u32, expected: u32 },
    #[error("index {index} does not divide degree {degree}")]
    IndexDoesNotDivideDegree { index: u64, degree: u64 },
    #[error("class `{class}` is not in the class group of {field}")]
    InvalidClass { field: String, class: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

impl CsaError {
    pub fn code(&self) -> &'static str {
        match self {
            CsaError::ModelMismatch { .. } => "csa.model_mismatch",
            CsaError::NotComposable => "csa.not_composable",
            CsaError::DivisibilityViolation { .. } => "csa.divisibility_violation",
            CsaError::NoCorestrictionDeclared { .. } => "csa.no_corestriction",
            CsaError::NoRestrictionDeclared { .. } => "csa.no_restriction",
            CsaError::NotDivisionObject { .. } => "csa.not_division_object",
            CsaError::DegreeMismatch { .. } => "csa.degree_mismatch",
            CsaError::IndexDoesNotDivideDegree { .. } => "csa.index_does_not_divide_degree",
            CsaError::InvalidClass { .. } => "csa.invalid_class",
            CsaError::InvalidModel(_) => "csa.invalid_model",
            CsaError::UnknownModel(_) => "csa.unknown_model",
        }
    }
}

pub type Result<T> = std::result::Result<T, CsaError>;

/// An element of `Q/Z`, kept in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrauerClass(Ratio<i64>);

impl BrauerClass {
    pub fn zero() -> Self {
        BrauerClass(Ratio::zero())
    }

    /// # Panics
    /// If `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        BrauerClass(r - r.floor())
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Additive order in `Q/Z`.
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.0 + other.0;
        BrauerClass(r - r.floor())
    }

    pub fn neg(&self) -> Self {
        let r = -self.0;
        BrauerClass(r - r.floor())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: i64) -> Self {
        let num = (i128::from(*self.0.numer()) * i128::from(s)).rem_euclid(i128::from(*self.0.denom()));
        BrauerClass::new(num as i64, *self.0.denom())
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassGroup {
    Trivial,
    /// `Z/m`, realized as `{r/m}` inside `Q/Z`.
    Cyclic(u64),
    RationalsModOne,
}

impl ClassGroup {
    pub fn contains(&self, c: &BrauerClass) -> bool {
        match self {
            ClassGroup::Trivial => c.is_zero(),
            ClassGroup::Cyclic(m) => m % c.order() == 0,
            ClassGroup::RationalsModOne => true,
        }
    }

    /// All classes, for finite groups.
    pub fn elements(&self) -> Option<Vec<BrauerClass>> {
        match self {
            ClassGroup::Trivial => Some(vec![BrauerClass::zero()]),
            ClassGroup::Cyclic(m) => Some((0..*m as i64).map(|r| BrauerClass::new(r, *m as i64)).collect()),
            ClassGroup::RationalsModOne => None,
        }
    }

    /// Classes used to check maps: all of them, or every `a/b` with
    /// `b <= 12` for `Q/Z`.
    pub fn check_elements(&self) -> Vec<BrauerClass> {
        self.elements().unwrap_or_else(|| {
            let mut out: Vec<BrauerClass> =
                (1..=12).flat_map(|b| (0..b).map(move |a| BrauerClass::new(a, b))).collect();
            out.sort();
            out.dedup();
            out
        })
    }

    fn describe(&self) -> Value {
        match self {
            ClassGroup::Trivial => json!("trivial"),
            ClassGroup::Cyclic(m) => json!({"cyclic": m}),
            ClassGroup::RationalsModOne => json!("rationals_mod_one"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexRule {
    Table(BTreeMap<BrauerClass, u64>),
    /// Index equals the additive order of the class.
    Order,
}

/// A class map `c -> s·c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassMap {
    Scale(i64),
}

impl ClassMap {
    pub fn apply(&self, c: &BrauerClass) -> BrauerClass {
        match self {
            ClassMap::Scale(s) => c.scale(*s),
        }
    }
}

/// Declared on the model of `k`: restriction to and corestriction from the
/// model of an extension `l` of degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionLink {
    pub to: String,
    pub degree: u32,
    pub res: Option<ClassMap>,
    pub cor: Option<ClassMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerModel {
    field: String,
    group: ClassGroup,
    index: IndexRule,
    links: Vec<ExtensionLink>,
}

impl BrauerModel {
    pub fn new(field: impl Into<String>, group: ClassGroup, index: IndexRule, links: Vec<ExtensionLink>) -> Result<Self> {
        let model = BrauerModel { field: field.into(), group, index, links };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CsaError::InvalidModel(format!("{}: {msg}", self.field)));
        if let ClassGroup::Cyclic(0) = self.group {
            return bad("cyclic group of order 0".into());
        }
        if let IndexRule::Table(t) = &self.index {
            let Some(elements) = self.group.elements() else {
                return bad("index tables need a finite class group".into());
            };
            for c in t.keys() {
                if !self.group.contains(c) {
                    return bad(format!("index table mentions class {c} outside the group"));
                }
            }
            for c in &elements {
                match t.get(c) {
                    None => return bad(format!("index table has no entry for class {c}")),
                    Some(0) => return bad(format!("index of {c} is 0")),
                    Some(_) => {}
                }
            }
        }
        if self.index(&BrauerClass::zero()) != 1 {
            return bad("the trivial class must have index 1".into());
        }
        for c in self.group.check_elements() {
            if self.index(&c) != self.index(&c.neg()) {
                return bad(format!("index of {c} differs from index of its opposite"));
            }
        }
        for link in &self.links {
            if link.degree == 0 {
                return bad(format!("link to {} has degree 0", link.to));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn group(&self) -> ClassGroup {
        self.group
    }

    pub fn links(&self) -> &[ExtensionLink] {
        &self.links
    }

    pub fn link_to(&self, field: &str) -> Option<&ExtensionLink> {
        self.links.iter().find(|l| l.to == field)
    }

    /// Index of a class of the model.
    pub fn index(&self, c: &BrauerClass) -> u64 {
        match &self.index {
            IndexRule::Table(t) => t.get(c).copied().unwrap_or(0),
            IndexRule::Order => c.order(),
        }
    }

    /// Integer `r` means `r/m` in `Z/m`; otherwise `a/b`.
    pub fn parse_class(&self, token: &str) -> Result<BrauerClass> {
        let invalid = || CsaError::InvalidClass { field: self.field.clone(), class: token.to_string() };
        let token = token.trim();
        let c = match token.split_once('/') {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| invalid())?;
                let b: i64 = b.trim().parse().map_err(|_| invalid())?;
                if b == 0 {
                    return Err(invalid());
                }
                BrauerClass::new(a, b)
            }
            None => {
                let r: i64 = token.parse().map_err(|_| invalid())?;
                match self.group {
                    ClassGroup::Cyclic(m) => BrauerClass::new(r, m as i64),
                    _ => BrauerClass::new(r, 1),
                }
            }
        };
        if !self.group.contains(&c) {
            return Err(invalid());
        }
        Ok(c)
    }

    pub fn to_json(&self) -> Value {
        let index = match &self.index {
            IndexRule::Table(t) => json!(t.iter().map(|(c, i)| (c.to_string(), json!(i))).collect::<serde_json::Map<_, _>>()),
            IndexRule::Order => json!("order"),
        };
        json!({
            "field": self.field,
            "group": self.group.describe(),
            "index": index,
            "maps": self.links.iter().map(|l| json!({
                "to": l.to,
                "degree": l.degree,
                "res": l.res.map(|ClassMap::Scale(s)| s),
                "cor": l.cor.map(|ClassMap::Scale(s)| s),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn real() -> Self {
        let table = BTreeMap::from([(BrauerClass::zero(), 1), (BrauerClass::new(1, 2), 2)]);
        let link = ExtensionLink {
            to: "C".into(),
            degree: 2,
            res: Some(ClassMap::Scale(0)),
            cor: Some(ClassMap::Scale(0)),
        };
        BrauerModel::new("R", ClassGroup::Cyclic(2), IndexRule::Table(table), vec![link]).expect("valid model")
    }

    pub fn complex() -> Self {
        BrauerModel::new("C", ClassGroup::Trivial, IndexRule::Order, vec![]).expect("valid model")
    }

    /// A local field `K` with `Br(K) = Q/Z` (index = order), linked to its
    /// unramified extensions `K_d` for `d = 2..=6`: `res` multiplies
    /// invariants by `d`, `cor` preserves them.
    pub fn local() -> Self {
        let links = (2..=6)
            .map(|d| ExtensionLink {
                to: format!("K_{d}"),
                degree: d,
                res: Some(ClassMap::Scale(i64::from(d))),
                cor: Some(ClassMap::Scale(1)),
            })
            .collect();
        BrauerModel::new("K", ClassGroup::RationalsModOne, IndexRule::Order, links).expect("valid model")
    }

    pub fn local_extension(d: u32) -> Self {
        BrauerModel::new(format!("K_{d}"), ClassGroup::RationalsModOne, IndexRule::Order, vec![]).expect("valid model")
    }
}

/// A set of models keyed by field, with checked links.
#[derive(Clone, Debug, Default)]
pub struct ModelRegistry {
    models: BTreeMap<String, Arc<BrauerModel>>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        ModelRegistry::default()
    }

    /// `R`, `C`, the local model `K` and `K_2..K_6`.
    pub fn builtin() -> Self {
        let mut reg = ModelRegistry::new();
        reg.insert(BrauerModel::real());
        reg.insert(BrauerModel::complex());
        reg.insert(BrauerModel::local());
        for d in 2..=6 {
            reg.insert(BrauerModel::local_extension(d));
        }
        reg.validate().expect("built-in models are consistent");
        reg
    }

    pub fn insert(&mut self, model: BrauerModel) -> Arc<BrauerModel> {
        let m = Arc::new(model);
        self.models.insert(m.field.clone(), m.clone());
        m
    }

    pub fn get(&self, field: &str) -> Result<Arc<BrauerModel>> {
        self.models.get(field).cloned().ok_or_else(|| CsaError::UnknownModel(field.to_string()))
    }

    pub fn models(&self) -> impl Iterator<Item = &Arc<BrauerModel>> {
        self.models.values()
    }

    /// Checks every link whose target is present: `res` lands in the target,
    /// `cor` lands in the source, and `cor ∘ res = d·id` on the source.
    pub fn validate(&self) -> Result<Vec<CorResCheck>> {
        let mut out = Vec::new();
        for k in self.models.values() {
            for link in &k.links {
                let Some(l) = self.models.get(&link.to) else { continue };
                out.push(check_link(k, l, link)?);
            }
        }
        Ok(out)
    }
}

/// Outcome of the `cor ∘ res = d·id` check for one link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorResCheck {
    pub from: String,
    pub to: String,
    pub degree: u32,
    pub classes_checked: usize,
    /// `false` when a map is missing and the identity could not be checked.
    pub checked: bool,
    pub exhaustive: bool,
}

pub fn check_link(k: &BrauerModel, l: &BrauerModel, link: &ExtensionLink) -> Result<CorResCheck> {
    let bad = |msg: String| Err(CsaError::InvalidModel(format!("{} -> {}: {msg}", k.field, l.field)));
    if let Some(res) = link.res {
        for c in k.group.check_elements() {
            let r = res.apply(&c);
            if !l.group.contains(&r) {
                return bad(format!("res({c}) = {r} is outside the target group"));
            }
        }
    }
    if let Some(cor) = link.cor {
        for c in l.group.check_elements() {
            let r = cor.apply(&c);
            if !k.group.contains(&r) {
                return bad(format!("cor({c}) = {r} is outside the source group"));
            }
        }
    }
    let mut check = CorResCheck {
        from: k.field.clone(),
        to: l.field.clone(),
        degree: link.degree,
        classes_checked: 0,
        checked: false,
        exhaustive: k.group.elements().is_some(),
    };
    if let (Some(res), Some(cor)) = (link.res, link.cor) {
        if k.group == ClassGroup::RationalsModOne {
            let (ClassMap::Scale(a), ClassMap::Scale(b)) = (res, cor);
            if i128::from(a) * i128::from(b) != i128::from(link.degree) {
                return bad(format!("cor ∘ res is multiplication by {}, not {}", a * b, link.degree));
            }
        }
        for c in k.group.check_elements() {
            let lhs = cor.apply(&res.apply(&c));
            let rhs = c.scale(i64::from(link.degree));
            if lhs != rhs {
                return bad(format!("cor(res({c})) = {lhs}, expected {rhs}"));
            }
            check.classes_checked += 1;
        }
        check.checked = true;
    }
    Ok(check)
}

#[derive(Clone, Debug)]
pub struct CsaObject {
    model: Arc<BrauerModel>,
    class: BrauerClass,
    degree: u64,
}

impl PartialEq for CsaObject {
    fn eq(&self, other: &Self) -> bool {
        self.model.field == other.model.field && self.class == other.class && self.degree == other.degree
    }
}

impl Eq for CsaObject {}

impl CsaObject {
    pub fn new(model: Arc<BrauerModel>, class: BrauerClass, degree: u64) -> Result<Self> {
        if !model.group.contains(&class) {
            return Err(CsaError::InvalidClass { field: model.field.clone(), class: class.to_string() });
        }
        let index = model.index(&class);
        if degree == 0 || !degree.is_multiple_of(index) {
            return Err(CsaError::IndexDoesNotDivideDegree { index, degree });
        }
        Ok(CsaObject { model, class, degree })
    }

    /// The division algebra of the class (degree = index).
    pub fn division(model: Arc<BrauerModel>, class: BrauerClass) -> Result<Self> {
        let degree = model.index(&class);
        CsaObject::new(model, class, degree)
    }

    /// The field itself.
    pub fn unit(model: Arc<BrauerModel>) -> Self {
        CsaObject { model, class: BrauerClass::zero(), degree: 1 }
    }

    pub fn model(&self) -> &Arc<BrauerModel> {
        &self.model
    }

    pub fn class(&self) -> BrauerClass {
        self.class
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn index(&self) -> u64 {
        self.model.index(&self.class)
    }

    pub fn is_division(&self) -> bool {
        self.degree == self.index()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.model.field,
            "class": self.class.to_string(),
            "degree": self.degree,
            "index": self.index(),
        })
    }
}

fn same_model(a: &CsaObject, b: &CsaObject) -> Result<()> {
    if a.model.field != b.model.field || a.model.group != b.model.group {
        return Err(CsaError::ModelMismatch { left: a.model.field.clone(), right: b.model.field.clone() });
    }
    Ok(())
}

/// `ind(A^op ⊗ B)`, the positive generator of `Hom(U(A), U(B))`.
pub fn hom_generator(a: &CsaObject, b: &CsaObject) -> Result<u64> {
    same_model(a, b)?;
    Ok(a.model.index(&b.class.sub(&a.class)))
}

/// `U(A) ≅ U(B)` iff the Brauer classes agree.
pub fn motive_iso_test(a: &CsaObject, b: &CsaObject) -> Result<bool> {
    same_model(a, b)?;
    Ok(a.class == b.class)
}

/// The element `multiple · generator` of `Hom(U(source), U(target))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsaHom {
    source: CsaObject,
    target: CsaObject,
    generator: u64,
    multiple: BigInt,
}

impl CsaHom {
    pub fn new(source: CsaObject, target: CsaObject, multiple: BigInt) -> Result<Self> {
        let generator = hom_generator(&source, &target)?;
        Ok(CsaHom { source, target, generator, multiple })
    }

    /// The hom with integer value `value`; it must be a multiple of the
    /// generator.
    pub fn from_value(source: CsaObject, target: CsaObject, value: BigInt) -> Result<Self> {
        let generator = hom_generator(&source, &target)?;
        let (q, r) = value.div_rem(&BigInt::from(generator));
        if !r.is_zero() {
            return Err(CsaError::DivisibilityViolation { value: value.to_string(), generator });
        }
        Ok(CsaHom { source, target, generator, multiple: q })
    }

    pub fn identity(a: &CsaObject) -> Self {
        CsaHom { source: a.clone(), target: a.clone(), generator: 1, multiple: BigInt::one() }
    }

    pub fn source(&self) -> &CsaObject {
        &self.source
    }

    pub fn target(&self) -> &CsaObject {
        &self.target
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn multiple(&self) -> &BigInt {
        &self.multiple
    }

    pub fn value(&self) -> BigInt {
        &self.multiple * self.generator
    }

    pub fn add(&self, other: &CsaHom) -> Result<CsaHom> {
        if self.source != other.source || self.target != other.target {
            return Err(CsaError::NotComposable);
        }
        Ok(CsaHom { multiple: &self.multiple + &other.multiple, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        let value = self.value();
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "generator": self.generator,
            "multiple": self.multiple.to_i64().map(Value::from).unwrap_or_else(|| Value::from(self.multiple.to_string())),
            "value": value.to_i64().map(Value::from).unwrap_or_else(|| Value::from(value.to_string())),
        })
    }
}

/// `g ∘ f` for `f: A -> B`, `g: B -> C`; values multiply.
pub fn compose(f: &CsaHom, g: &CsaHom) -> Result<CsaHom> {
    if f.target != g.source {
        return Err(CsaError::NotComposable);
    }
    CsaHom::from_value(f.source.clone(), g.target.clone(), f.value() * g.value())
}

/// `n -> n^d`, the action of Weil restriction on hom values.
pub fn weil_restrict_hom(n: &BigInt, d: u32) -> BigInt {
    n.pow(d)
}

fn link_into(registry: &ModelRegistry, k_field: &str, l_field: &str) -> Result<(Arc<BrauerModel>, ExtensionLink)> {
    let k = registry.get(k_field)?;
    let link = k.link_to(l_field).cloned().ok_or_else(|| CsaError::NoCorestrictionDeclared {
        from: l_field.to_string(),
        to: k_field.to_string(),
    })?;
    Ok((k, link))
}

/// `R_{l/k}(D)` for a division object `D` over `l`: class `cor([D])`,
/// degree `ind(D)^d`.
pub fn weil_restrict_obj(registry: &ModelRegistry, k_field: &str, d: u32, obj: &CsaObject) -> Result<CsaObject> {
    let (k, link) = link_into(registry, k_field, &obj.model.field)?;
    let cor = link.cor.ok_or_else(|| CsaError::NoCorestrictionDeclared {
        from: obj.model.field.clone(),
        to: k_field.to_string(),
    })?;
    if link.degree != d {
        return Err(CsaError::DegreeMismatch { declared: link.degree, expected: d });
    }
    if !obj.is_division() {
        return Err(CsaError::NotDivisionObject { index: obj.index(), degree: obj.degree });
    }
    let degree = obj.index().checked_pow(d).ok_or_else(|| CsaError::InvalidModel("degree overflow".into()))?;
    CsaObject::new(k, cor.apply(&obj.class), degree)
}

/// Image of `f: D -> D'` (division objects over `l`) in
/// `Hom(U(R D), U(R D'))`: the value `n` goes to `n^d`.
pub fn weil_restrict_hom_element(registry: &ModelRegistry, k_field: &str, d: u32, f: &CsaHom) -> Result<CsaHom> {
    let source = weil_restrict_obj(registry, k_field, d, &f.source)?;
    let target = weil_restrict_obj(registry, k_field, d, &f.target)?;
    CsaHom::from_value(source, target, weil_restrict_hom(&f.value(), d))
}

/// Base change along `k -> l`: same integer value, new generator
/// `ind(res([B] - [A]))`.
pub fn base_change_hom(registry: &ModelRegistry, f: &CsaHom, l_field: &str) -> Result<CsaHom> {
    let k = &f.source.model;
    let no_res = || CsaError::NoRestrictionDeclared { from: k.field.clone(), to: l_field.to_string() };
    let link = k.link_to(l_field).ok_or_else(no_res)?;
    let res = link.res.ok_or_else(no_res)?;
    let l = registry.get(l_field)?;
    let source = CsaObject::new(l.clone(), res.apply(&f.source.class), f.source.degree)?;
    let target = CsaObject::new(l, res.apply(&f.target.class), f.target.degree)?;
    let out = CsaHom::from_value(source, target, f.value())?;
    if !f.generator.is_multiple_of(out.generator) {
        return Err(CsaError::DivisibilityViolation { value: f.generator.to_string(), generator: out.generator });
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Name(String),
    Cyclic { cyclic: u64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapJson {
    Scale(i64),
    Object { scale: i64 },
}

impl From<MapJson> for ClassMap {
    fn from(m: MapJson) -> Self {
        match m {
            MapJson::Scale(s) | MapJson::Object { scale: s } => ClassMap::Scale(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkJson {
    to: String,
    degree: u32,
    res: Option<MapJson>,
    cor: Option<MapJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    #[serde(default)]
    schema_version: Option<u32>,
    field: String,
    group: GroupJson,
    index: Option<BTreeMap<String, u64>>,
    #[serde(default)]
    maps: Vec<LinkJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFileJson {
    schema_version: u32,
    models: Vec<ModelJson>,
}

fn model_from_json(m: ModelJson) -> Result<BrauerModel> {
    if let Some(v) = m.schema_version {
        if v != 1 {
            return Err(CsaError::InvalidModel(format!("unsupported schema_version {v}")));
        }
    }
    let group = match m.group {
        GroupJson::Name(n) if n == "trivial" => ClassGroup::Trivial,
        GroupJson::Name(n) if n == "rationals_mod_one" => ClassGroup::RationalsModOne,
        GroupJson::Name(n) => return Err(CsaError::InvalidModel(format!("unknown class group `{n}`"))),
        GroupJson::Cyclic { cyclic } => ClassGroup::Cyclic(cyclic),
    };
    let shell = BrauerModel { field: m.field.clone(), group, index: IndexRule::Order, links: vec![] };
    let index = match m.index {
        None => IndexRule::Order,
        Some(t) => {
            let mut table = BTreeMap::new();
            for (token, i) in t {
                table.insert(shell.parse_class(&token)?, i);
            }
            IndexRule::Table(table)
        }
    };
    let links = m
        .maps
        .into_iter()
        .map(|l| ExtensionLink { to: l.to, degree: l.degree, res: l.res.map(Into::into), cor: l.cor.map(Into::into) })
        .collect();
    BrauerModel::new(m.field, group, index, links)
}

/// Parses a single model or `{"schema_version": 1, "models": [...]}`.
pub fn models_from_json(value: Value) -> std::result::Result<Vec<BrauerModel>, String> {
    if value.get("models").is_some() {
        let file: ModelFileJson = serde_json::from_value(value).map_err(|e| e.to_string())?;
        if file.schema_version != 1 {
            return Err(format!("unsupported schema_version {}", file.schema_version));
        }
        file.models.into_iter().map(|m| model_from_json(m).map_err(|e| e.to_string())).collect()
    } else {
        let m: ModelJson = serde_json::from_value(value).map_err(|e| e.to_string())?;
        Ok(vec![model_from_json(m).map_err(|e| e.to_string())?])
    }
}
