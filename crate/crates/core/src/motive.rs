//! Galois contexts and the orbit decompositions of Weil restrictions.
//!
//! A context is a finite group `G = Gal(L/k)` with a subgroup `H` fixing `l`.
//! The restriction of `l^{⊕n}` splits as one summand `U(L^{stab α})` per
//! orbit `α` of `G` on label functions `G/H -> {1..n}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{
    all_subgroups, canonical_conjugate, canonical_conjugate_unchecked, left_cosets, CosetSpace, FiniteGroup,
    GroupError, Subgroup,
};
use crate::orbit::{orbits_with_cap, stabilizer, LabelFunction, Orbit, OrbitError, DEFAULT_ENUMERATION_CAP};
use crate::polymap::{big_json, Domain, PointedMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotiveError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("negative multiplicity {value} at position {position}")]
    NegativeMultiplicity { position: usize, value: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl MotiveError {
    pub fn code(&self) -> &'static str {
        match self {
            MotiveError::Group(e) => e.code(),
            MotiveError::Orbit(e) => e.code(),
            MotiveError::NegativeMultiplicity { .. } => "motive.negative_multiplicity",
            MotiveError::Precondition(_) => "motive.precondition",
        }
    }

    pub fn is_cap(&self) -> bool {
        match self {
            MotiveError::Group(e) => e.is_cap(),
            MotiveError::Orbit(e) => e.is_cap(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, MotiveError>;

/// Display names for the base field, the extension and the Galois closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldNames {
    #[serde(default = "default_k")]
    pub k: String,
    #[serde(default = "default_l")]
    pub l: String,
    #[serde(default = "default_big_l", rename = "L")]
    pub big_l: String,
}

fn default_k() -> String {
    "k".into()
}

fn default_l() -> String {
    "l".into()
}

fn default_big_l() -> String {
    "L".into()
}

impl Default for FieldNames {
    fn default() -> Self {
        FieldNames { k: default_k(), l: default_l(), big_l: default_big_l() }
    }
}

#[derive(Clone, Debug)]
pub struct GaloisContext {
    group: FiniteGroup,
    h: Subgroup,
    cosets: CosetSpace,
    names: FieldNames,
    field_names: BTreeMap<String, String>,
    h_class: Subgroup,
    whole_class: Subgroup,
    trivial: Subgroup,
}

pub fn make_context(group: FiniteGroup, h: Subgroup, names: FieldNames) -> Result<GaloisContext> {
    let cosets = left_cosets(&group, &h)?;
    let h_class = canonical_conjugate(&group, &h)?;
    let whole_class = Subgroup::whole(&group);
    let trivial = Subgroup::trivial(&group);
    Ok(GaloisContext { group, h, cosets, names, field_names: BTreeMap::new(), h_class, whole_class, trivial })
}

impl GaloisContext {
    /// Display overrides keyed by the canonical subgroup key (`"0,3"`).
    pub fn with_field_names(mut self, field_names: BTreeMap<String, String>) -> Self {
        self.field_names = field_names;
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn names(&self) -> &FieldNames {
        &self.names
    }

    /// `[G:H]`
    pub fn degree(&self) -> usize {
        self.cosets.len()
    }

    /// Label of the fixed field `L^S`, identified up to conjugacy of `S`.
    pub fn field_label(&self, s: &Subgroup) -> FieldLabel {
        let class = canonical_conjugate_unchecked(&self.group, s);
        let key = class.key();
        let display = if let Some(name) = self.field_names.get(&key) {
            name.clone()
        } else if class == self.whole_class {
            self.names.k.clone()
        } else if class == self.h_class {
            self.names.l.clone()
        } else if class == self.trivial {
            self.names.big_l.clone()
        } else {
            format!("{}^{{{}}}", self.names.big_l, key)
        };
        FieldLabel { degree: self.group.order() / class.len(), subgroup: class.members().to_vec(), display }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group_order": self.group.order(),
            "H": self.h.members(),
            "degree": self.degree(),
            "names": {"k": self.names.k, "l": self.names.l, "L": self.names.big_l},
        })
    }
}

/// A fixed field `L^S`, stored through the canonical conjugate of `S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldLabel {
    /// `[G:S]`
    pub degree: usize,
    pub subgroup: Vec<usize>,
    pub display: String,
}

impl FieldLabel {
    pub fn key(&self) -> String {
        self.subgroup.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

/// Formal sum `⊕ U(L^S)^{⊕c}` with positive coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MotiveSum {
    terms: BTreeMap<FieldLabel, BigUint>,
}

impl MotiveSum {
    pub fn new() -> Self {
        MotiveSum::default()
    }

    pub fn add(&mut self, label: FieldLabel, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(label).or_default() += c;
    }

    pub fn terms(&self) -> &BTreeMap<FieldLabel, BigUint> {
        &self.terms
    }

    pub fn coefficient(&self, display: &str) -> BigUint {
        self.terms.iter().filter(|(l, _)| l.display == display).map(|(_, c)| c.clone()).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: u64) -> MotiveSum {
        let mut out = MotiveSum::new();
        for (l, c) in &self.terms {
            out.add(l.clone(), c * k);
        }
        out
    }

    /// `{display: coefficient}` pairs, for tests and quick comparison.
    pub fn by_display(&self) -> BTreeMap<String, BigUint> {
        let mut out: BTreeMap<String, BigUint> = BTreeMap::new();
        for (l, c) in &self.terms {
            *out.entry(l.display.clone()).or_default() += c;
        }
        out
    }

    /// `U(k)^{⊕7} ⊕ U(l)^{⊕21}`; `ring` renders `U_R(..)`.
    pub fn render(&self, ring: Option<&str>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let u = match ring {
            Some(r) => format!("U_{r}"),
            None => "U".into(),
        };
        self.terms
            .iter()
            .map(|(l, c)| {
                if c.is_one() {
                    format!("{u}({l})")
                } else {
                    format!("{u}({l})^{{⊕{c}}}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    pub fn to_json(&self) -> Value {
        let terms: serde_json::Map<String, Value> =
            self.by_display().into_iter().map(|(k, c)| (k, big_json(&BigInt::from(c)))).collect();
        let summands: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, c)| {
                json!({
                    "field": l.display,
                    "degree": l.degree,
                    "subgroup": l.subgroup,
                    "coefficient": big_json(&BigInt::from(c.clone())),
                })
            })
            .collect();
        json!({"terms": terms, "summands": summands})
    }
}

impl fmt::Display for MotiveSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// One orbit with its fixed-field label and coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub rep: Vec<u32>,
    pub stabilizer: Vec<usize>,
    /// `[G:stab]`, the orbit size.
    pub stab_index: usize,
    pub field: FieldLabel,
    pub coefficient: BigUint,
}

impl OrbitRow {
    fn to_json(&self) -> Value {
        json!({
            "rep": self.rep,
            "stabilizer": self.stabilizer,
            "stab_index": self.stab_index,
            "field": self.field.display,
            "coefficient": big_json(&BigInt::from(self.coefficient.clone())),
        })
    }
}

struct Labelled {
    orbit: Orbit,
    label: FieldLabel,
}

fn labelled_orbits(ctx: &GaloisContext, n: u32, cap: u64) -> Result<Vec<Labelled>> {
    let set = orbits_with_cap(&ctx.group, &ctx.cosets, n, cap)?;
    let mut cache: HashMap<Vec<usize>, FieldLabel> = HashMap::new();
    Ok(set
        .orbits()
        .iter()
        .map(|o| {
            let label = cache
                .entry(o.stabilizer().members().to_vec())
                .or_insert_with(|| ctx.field_label(o.stabilizer()))
                .clone();
            Labelled { orbit: o.clone(), label }
        })
        .collect())
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(MotiveError::Precondition("n must be at least 1".into()));
    }
    Ok(())
}

/// Orbits of `O(G/H, n)` with coefficient 1 each, plus their sum.
pub fn weil_restrict_rows(ctx: &GaloisContext, n: u32, cap: u64) -> Result<(MotiveSum, Vec<OrbitRow>)> {
    check_n(n)?;
    let rows: Vec<OrbitRow> = labelled_orbits(ctx, n, cap)?
        .into_iter()
        .map(|l| OrbitRow {
            rep: l.orbit.canonical_rep().values().to_vec(),
            stabilizer: l.orbit.stabilizer().members().to_vec(),
            stab_index: l.orbit.size(),
            field: l.label,
            coefficient: BigUint::one(),
        })
        .collect();
    Ok((sum_rows(&rows), rows))
}

fn sum_rows(rows: &[OrbitRow]) -> MotiveSum {
    let mut sum = MotiveSum::new();
    for r in rows {
        sum.add(r.field.clone(), r.coefficient.clone());
    }
    sum
}

/// `⊕_{α ∈ O(G/H, n)} U(L^{stab α})`.
pub fn weil_restrict_sum(ctx: &GaloisContext, n: u32) -> Result<MotiveSum> {
    Ok(weil_restrict_rows(ctx, n, DEFAULT_ENUMERATION_CAP)?.0)
}

fn check_multiplicities(m: &[i64]) -> Result<Vec<BigUint>> {
    m.iter()
        .enumerate()
        .map(|(position, &value)| {
            u64::try_from(value).map(BigUint::from).map_err(|_| MotiveError::NegativeMultiplicity { position, value })
        })
        .collect()
}

/// Image of the class `Σ m_i [l]_i` with coefficient
/// `c_α(m) = Π_p m[α(p)]` on each orbit.
pub fn restrict_class_rows(ctx: &GaloisContext, m: &[i64], cap: u64) -> Result<(MotiveSum, Vec<OrbitRow>)> {
    let n = u32::try_from(m.len()).map_err(|_| MotiveError::Precondition("too many multiplicities".into()))?;
    check_n(n)?;
    let mult = check_multiplicities(m)?;
    let rows: Vec<OrbitRow> = labelled_orbits(ctx, n, cap)?
        .into_iter()
        .map(|l| {
            let rep = l.orbit.canonical_rep().values().to_vec();
            let coefficient = rep.iter().map(|&v| mult[v as usize - 1].clone()).product();
            OrbitRow {
                rep,
                stabilizer: l.orbit.stabilizer().members().to_vec(),
                stab_index: l.orbit.size(),
                field: l.label,
                coefficient,
            }
        })
        .collect();
    Ok((sum_rows(&rows), rows))
}

pub fn restrict_class(ctx: &GaloisContext, m: &[i64]) -> Result<MotiveSum> {
    Ok(restrict_class_rows(ctx, m, DEFAULT_ENUMERATION_CAP)?.0)
}

/// `restrict_class` as a map `N^n -> Z^{#labels}`, one coordinate per field
/// label occurring in `weil_restrict_sum(ctx, n)`.
pub fn restrict_class_map(ctx: &GaloisContext, n: u32) -> Result<(PointedMap, Vec<FieldLabel>)> {
    check_n(n)?;
    let orbits = labelled_orbits(ctx, n, DEFAULT_ENUMERATION_CAP)?;
    let labels: Vec<FieldLabel> = orbits.iter().map(|l| l.label.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let plan: Vec<(Vec<usize>, usize)> = orbits
        .iter()
        .map(|l| {
            let rep = l.orbit.canonical_rep().values().iter().map(|&v| v as usize - 1).collect();
            (rep, labels.binary_search(&l.label).expect("label present"))
        })
        .collect();
    let width = labels.len();
    let name = format!("restrict-class[d={},n={n}]", ctx.degree());
    let map = PointedMap::new(name, n as usize, width, Domain::Monoid, move |m| {
        let mut out = vec![BigInt::zero(); width];
        for (rep, slot) in &plan {
            out[*slot] += rep.iter().map(|&i| m[i].clone()).product::<BigInt>();
        }
        out
    });
    Ok((map, labels))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCheck {
    pub holds: bool,
    /// `Σ_α c_α [G:stab α]`
    pub total: BigUint,
    /// `(Σ m)^d`
    pub expected: BigUint,
    pub rows: Vec<OrbitRow>,
}

impl DimensionCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "total": big_json(&BigInt::from(self.total.clone())),
            "expected": big_json(&BigInt::from(self.expected.clone())),
            "orbits": self.rows.iter().map(|r| {
                let mut v = r.to_json();
                v["contribution"] = big_json(&BigInt::from(&r.coefficient * r.stab_index));
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// `Σ_α [G:stab α] = n^d`.
pub fn dimension_identity_check(ctx: &GaloisContext, n: u32) -> Result<DimensionCheck> {
    dimension_identity_weighted(ctx, &vec![1; n as usize])
}

/// `Σ_α c_α(m) [G:stab α] = (Σ m)^d`.
pub fn dimension_identity_weighted(ctx: &GaloisContext, m: &[i64]) -> Result<DimensionCheck> {
    let (_, rows) = restrict_class_rows(ctx, m, DEFAULT_ENUMERATION_CAP)?;
    let total: BigUint = rows.iter().map(|r| &r.coefficient * r.stab_index).sum();
    let s: BigUint = check_multiplicities(m)?.into_iter().sum();
    let expected = s.pow(ctx.degree() as u32);
    Ok(DimensionCheck { holds: total == expected, total, expected, rows })
}

/// Fixed fields of the subgroups `H ⊆ H′ ⊆ G` (up to conjugacy), by degree.
pub fn intermediate_fields(ctx: &GaloisContext) -> Result<Vec<FieldLabel>> {
    Ok(intermediate_subgroups(ctx)?.into_iter().map(|(label, _)| label).collect())
}

/// Each intermediate class with a representative that contains `H` itself.
fn intermediate_subgroups(ctx: &GaloisContext) -> Result<Vec<(FieldLabel, Subgroup)>> {
    let g = &ctx.group;
    let mut found: BTreeMap<FieldLabel, Subgroup> = BTreeMap::new();
    for s in all_subgroups(g)? {
        if s.len() % ctx.h.len() != 0 || !ctx.h.is_subset_of(&s) {
            continue;
        }
        found.entry(ctx.field_label(&s)).or_insert(s);
    }
    Ok(found.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageEntry {
    pub field: FieldLabel,
    /// Representative `H′ ⊇ H` used for the witness.
    pub subgroup: Vec<usize>,
    /// `α′`: 1 on the cosets inside `H′`, `n` elsewhere.
    pub witness: Vec<u32>,
    pub witness_stabilizer: Vec<usize>,
    /// Whether the stabilizer class occurs among the enumerated orbits.
    pub occurs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub n: u32,
    pub covered: bool,
    pub entries: Vec<CoverageEntry>,
}

impl CoverageReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "covered": self.covered,
            "fields": self.entries.iter().map(|e| json!({
                "field": e.field.display,
                "degree": e.field.degree,
                "subgroup": e.subgroup,
                "witness": e.witness,
                "witness_stabilizer": e.witness_stabilizer,
                "occurs": e.occurs,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks that every intermediate field `L^{H′}` appears as a summand of the
/// restriction of `l^{⊕n}`, building `α′` for each `H′`.
pub fn stabilizer_coverage(ctx: &GaloisContext, n: u32) -> Result<CoverageReport> {
    if n < 2 {
        return Err(MotiveError::Precondition(format!("stabilizer coverage needs n >= 2, got {n}")));
    }
    let classes = intermediate_subgroups(ctx)?;
    let seen: BTreeSet<FieldLabel> = labelled_orbits(ctx, n, DEFAULT_ENUMERATION_CAP)?.into_iter().map(|l| l.label).collect();
    let mut entries = Vec::with_capacity(classes.len());
    for (field, rep) in classes {
        let values: Vec<u32> = ctx
            .cosets
            .reps()
            .iter()
            .map(|&g| if rep.contains(g) { 1 } else { n })
            .collect();
        let alpha = LabelFunction::new(values.clone(), n)?;
        let stab = stabilizer(&ctx.group, &ctx.cosets, &alpha)?;
        let occurs = stab == rep && seen.contains(&field);
        entries.push(CoverageEntry {
            field,
            subgroup: rep.members().to_vec(),
            witness: values,
            witness_stabilizer: stab.members().to_vec(),
            occurs,
        });
    }
    let covered = entries.iter().all(|e| e.occurs);
    Ok(CoverageReport { n, covered, entries })
}

/// Twisted Artin motives `M(Spec L^S) ⊗ 𝕃^i` of which the motive of the
/// restriction is a direct summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinTateAmbient {
    pub max_twist: usize,
    pub terms: Vec<(FieldLabel, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub context: Value,
    pub input: String,
    pub sum: MotiveSum,
    pub rows: Vec<OrbitRow>,
    pub ambient: Option<ArtinTateAmbient>,
}

impl DecompositionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "context": self.context,
            "input": self.input,
            "decomposition": self.sum.to_json(),
            "orbits": self.rows.iter().map(OrbitRow::to_json).collect::<Vec<_>>(),
            "ambient": self.ambient.as_ref().map(|a| json!({
                "relation": "direct_summand_of",
                "max_twist": a.max_twist,
                "terms": a.terms.iter().map(|(l, i)| json!({"field": l.display, "twist": i})).collect::<Vec<_>>(),
            })),
        })
    }

    pub fn render_text(&self) -> String {
        self.render_text_with(None)
    }

    /// Text table; `ring` renders the sum as `U_R(..)`.
    pub fn render_text_with(&self, ring: Option<&str>) -> String {
        let mut out = format!("{}\n{}\n", self.input, self.sum.render(ring));
        for r in &self.rows {
            let rep: Vec<String> = r.rep.iter().map(u32::to_string).collect();
            out.push_str(&format!(
                "  [{}]  stab={:?}  [G:stab]={}  {}  x{}\n",
                rep.join(","),
                r.stabilizer,
                r.stab_index,
                r.field,
                r.coefficient
            ));
        }
        if let Some(a) = &self.ambient {
            let terms: Vec<String> = a.terms.iter().map(|(l, i)| format!("M({l})⊗𝕃^{i}")).collect();
            out.push_str(&format!("direct summand of: {}\n", terms.join(" ⊕ ")));
        }
        out
    }
}

pub fn decomposition_report(ctx: &GaloisContext, n: u32) -> Result<DecompositionReport> {
    let (sum, rows) = weil_restrict_rows(ctx, n, DEFAULT_ENUMERATION_CAP)?;
    Ok(DecompositionReport { context: ctx.to_json(), input: format!("l^{{⊕{n}}}"), sum, rows, ambient: None })
}

/// Decomposition for a scheme `X` with a full exceptional collection of
/// length `n`; with `dim_x`, also the Artin–Tate ambient for twists
/// `0..=d·dim_x`.
pub fn exceptional_collection_report(
    ctx: &GaloisContext,
    scheme: &str,
    n: u32,
    dim_x: Option<u32>,
) -> Result<DecompositionReport> {
    let (sum, rows) = weil_restrict_rows(ctx, n, DEFAULT_ENUMERATION_CAP)?;
    let ambient = dim_x.map(|dim| {
        let max_twist = ctx.degree() * dim as usize;
        let terms = sum.terms().keys().flat_map(|l| (0..=max_twist).map(move |i| (l.clone(), i))).collect();
        ArtinTateAmbient { max_twist, terms }
    });
    Ok(DecompositionReport {
        context: ctx.to_json(),
        input: format!("R({scheme}), exceptional collection of length {n}"),
        sum,
        rows,
        ambient,
    })
}

/// Small integers for a label coefficient, if they fit.
pub fn coefficient_u64(sum: &MotiveSum, display: &str) -> Option<u64> {
    sum.coefficient(display).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    fn c2_ctx() -> GaloisContext {
        let g = FiniteGroup::cyclic(2).unwrap();
        let h = Subgroup::trivial(&g);
        let names = FieldNames { k: "ℚ".into(), l: "ℚ(ζ3)".into(), big_l: "ℚ(ζ3)".into() };
        make_context(g, h, names).unwrap()
    }

    fn s3_c2() -> GaloisContext {
        let g = named_group("symmetric", 3).unwrap();
        let t = (0..g.order()).find(|&x| x != 0 && g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[t]).unwrap();
        make_context(g, h, FieldNames::default()).unwrap()
    }

    fn ctx(g: FiniteGroup, h: &[usize]) -> GaloisContext {
        let h = Subgroup::generated(&g, h).unwrap();
        make_context(g, h, FieldNames::default()).unwrap()
    }

    fn coeffs(sum: &MotiveSum) -> Vec<(String, u64)> {
        sum.by_display().into_iter().map(|(k, v)| (k, v.to_u64().unwrap())).collect()
    }

    #[test]
    fn context_degrees() {
        assert_eq!(c2_ctx().degree(), 2);
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(make_context(g.clone(), Subgroup::whole(&g), FieldNames::default()).unwrap().degree(), 1);
        assert_eq!(s3_c2().degree(), 3);
        let bad = Subgroup::new(&g, vec![0, 1]);
        assert!(bad.is_err());
    }

    #[test]
    fn moduli_space_example() {
        let sum = weil_restrict_sum(&c2_ctx(), 7).unwrap();
        assert_eq!(coeffs(&sum), vec![("ℚ".into(), 7), ("ℚ(ζ3)".into(), 21)]);
        assert_eq!(sum.render(Some("R")), "U_R(ℚ)^{⊕7} ⊕ U_R(ℚ(ζ3))^{⊕21}");
    }

    #[test]
    fn n_one_gives_base_field() {
        for c in [c2_ctx(), s3_c2()] {
            assert_eq!(coeffs(&weil_restrict_sum(&c, 1).unwrap()), vec![(c.names().k.clone(), 1)]);
        }
    }

    #[test]
    fn generic_n_for_quadratic() {
        for n in 1..=12u32 {
            let sum = weil_restrict_sum(&c2_ctx(), n).unwrap();
            assert_eq!(coefficient_u64(&sum, "ℚ"), Some(n as u64));
            assert_eq!(coefficient_u64(&sum, "ℚ(ζ3)"), Some((n * (n - 1) / 2) as u64));
        }
    }

    #[test]
    fn restrict_class_examples() {
        let c = c2_ctx();
        assert_eq!(restrict_class(&c, &[1; 5]).unwrap(), weil_restrict_sum(&c, 5).unwrap());
        let (sum, rows) = restrict_class_rows(&c, &[2, 1], DEFAULT_ENUMERATION_CAP).unwrap();
        let per: Vec<(Vec<u32>, u64)> = rows.iter().map(|r| (r.rep.clone(), r.coefficient.to_u64().unwrap())).collect();
        assert_eq!(per, vec![(vec![1, 1], 4), (vec![1, 2], 2), (vec![2, 2], 1)]);
        assert_eq!(coeffs(&sum), vec![("ℚ".into(), 5), ("ℚ(ζ3)".into(), 2)]);
        assert_eq!(coeffs(&restrict_class(&c, &[1, 0]).unwrap()), vec![("ℚ".into(), 1)]);
        assert!(matches!(
            restrict_class(&c, &[1, -2]),
            Err(MotiveError::NegativeMultiplicity { position: 1, value: -2 })
        ));
        let check = dimension_identity_weighted(&c, &[2, 1]).unwrap();
        assert!(check.holds);
        assert_eq!(check.total, BigUint::from(9u32));
    }

    #[test]
    fn basis_vectors_give_base_field() {
        let c = s3_c2();
        for i in 0..3 {
            let mut m = vec![0; 3];
            m[i] = 1;
            assert_eq!(coeffs(&restrict_class(&c, &m).unwrap()), vec![("k".into(), 1)]);
        }
    }

    #[test]
    fn dimension_identities() {
        let check = dimension_identity_check(&c2_ctx(), 7).unwrap();
        assert!(check.holds);
        assert_eq!(check.total, BigUint::from(49u32));
        assert!(dimension_identity_check(&s3_c2(), 1).unwrap().holds);
        let check = dimension_identity_check(&s3_c2(), 2).unwrap();
        assert_eq!(check.rows.len(), 4);
        assert_eq!(check.total, BigUint::from(8u32));
    }

    #[test]
    fn intermediate_field_degrees() {
        let degs = |c: &GaloisContext| intermediate_fields(c).unwrap().iter().map(|l| l.degree).collect::<Vec<_>>();
        assert_eq!(degs(&c2_ctx()), vec![1, 2]);
        assert_eq!(degs(&s3_c2()), vec![1, 3]);
        assert_eq!(degs(&ctx(FiniteGroup::cyclic(4).unwrap(), &[])), vec![1, 2, 4]);
        let labels = intermediate_fields(&c2_ctx()).unwrap();
        assert_eq!(labels[0].display, "ℚ");
        assert_eq!(labels[1].display, "ℚ(ζ3)");
    }

    #[test]
    fn coverage() {
        let r = stabilizer_coverage(&c2_ctx(), 2).unwrap();
        assert!(r.covered);
        assert_eq!(r.entries[1].witness, vec![1, 2]);
        let r = stabilizer_coverage(&s3_c2(), 2).unwrap();
        assert!(r.covered);
        assert_eq!(r.entries.len(), 2);
        assert_eq!(r.entries[1].witness.iter().filter(|&&v| v == 1).count(), 1);
        assert!(matches!(stabilizer_coverage(&c2_ctx(), 1), Err(MotiveError::Precondition(_))));
    }

    #[test]
    fn non_additivity() {
        let c = s3_c2();
        let two = weil_restrict_sum(&c, 2).unwrap();
        let one = weil_restrict_sum(&c, 1).unwrap();
        assert_ne!(two, one.scaled(2));
        assert_eq!(coeffs(&two), vec![("k".into(), 2), ("l".into(), 2)]);
    }

    #[test]
    fn conjugate_stabilizers_share_a_label() {
        let c = ctx(named_group("symmetric", 3).unwrap(), &[]);
        let sum = weil_restrict_sum(&c, 2).unwrap();
        // orbits on functions S3 -> {1,2}: the three transposition classes merge
        let labels: Vec<usize> = sum.terms().keys().map(|l| l.degree).collect();
        assert_eq!(labels, vec![1, 2, 3, 6]);
    }

    #[test]
    fn exceptional_collection() {
        let r = exceptional_collection_report(&c2_ctx(), "M̄₀,₅", 7, None).unwrap();
        assert_eq!(coeffs(&r.sum), vec![("ℚ".into(), 7), ("ℚ(ζ3)".into(), 21)]);
        assert!(r.ambient.is_none());
        let c = ctx(FiniteGroup::cyclic(2).unwrap(), &[]);
        let r = exceptional_collection_report(&c, "ℙ¹", 2, Some(1)).unwrap();
        assert_eq!(coeffs(&r.sum), vec![("k".into(), 2), ("l".into(), 1)]);
        let a = r.ambient.clone().unwrap();
        assert_eq!(a.max_twist, 2);
        assert_eq!(a.terms.len(), 6);
        assert_eq!(r.to_json()["ambient"]["relation"], "direct_summand_of");
        let r = exceptional_collection_report(&c, "pt", 1, None).unwrap();
        assert_eq!(coeffs(&r.sum), vec![("k".into(), 1)]);
    }

    #[test]
    fn restrict_class_map_matches() {
        let c = c2_ctx();
        let (map, labels) = restrict_class_map(&c, 2).unwrap();
        assert_eq!(labels.len(), 2);
        let v = map.eval_i64(&[2, 1]).unwrap();
        assert_eq!(v, vec![BigInt::from(5), BigInt::from(2)]);
    }

    #[test]
    fn field_name_overrides() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let c = make_context(g.clone(), Subgroup::trivial(&g), FieldNames::default())
            .unwrap()
            .with_field_names(BTreeMap::from([("0,2".to_string(), "K".to_string())]));
        let names: Vec<String> = intermediate_fields(&c).unwrap().into_iter().map(|l| l.display).collect();
        assert_eq!(names, vec!["k", "K", "l"]);
    }
}
