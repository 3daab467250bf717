//! The action `(rho . alpha)(sigma H) = alpha(rho^-1 sigma H)` of a finite
//! group on label functions `G/H -> {1..n}`, its orbits and stabilizers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{coset_action, CosetSpace, FiniteGroup, GroupError, Subgroup};

/// Default bound on `n^[G:H]` for explicit orbit enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("label function has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("label value {value} at position {position} is outside 1..={n}")]
    ValueOutOfRange { position: usize, value: u32, n: u32 },
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("enumerating {count} label functions exceeds the cap {cap}; use burnside_count for the orbit count")]
    EnumerationCapExceeded { count: String, cap: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl OrbitError {
    pub fn code(&self) -> &'static str {
        match self {
            OrbitError::LengthMismatch { .. } => "orbit.length_mismatch",
            OrbitError::ValueOutOfRange { .. } => "orbit.value_out_of_range",
            OrbitError::EmptyAlphabet => "orbit.empty_alphabet",
            OrbitError::EnumerationCapExceeded { .. } => "orbit.enumeration_cap_exceeded",
            OrbitError::Group(e) => e.code(),
        }
    }

    pub fn is_cap(&self) -> bool {
        match self {
            OrbitError::EnumerationCapExceeded { .. } => true,
            OrbitError::Group(e) => e.is_cap(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, OrbitError>;

/// A map from coset positions to `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabelFunction {
    values: Vec<u32>,
    #[serde(skip)]
    n: u32,
}

impl LabelFunction {
    pub fn new(values: Vec<u32>, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(OrbitError::EmptyAlphabet);
        }
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v == 0 || v > n) {
            return Err(OrbitError::ValueOutOfRange { position, value, n });
        }
        Ok(LabelFunction { values, n })
    }

    pub fn constant(value: u32, len: usize, n: u32) -> Result<Self> {
        Self::new(vec![value; len], n)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn alphabet(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, cs: &CosetSpace) -> Result<()> {
        if self.values.len() != cs.len() {
            return Err(OrbitError::LengthMismatch { got: self.values.len(), expected: cs.len() });
        }
        Ok(())
    }
}

/// `rho . alpha`.
pub fn act(group: &FiniteGroup, cs: &CosetSpace, rho: usize, alpha: &LabelFunction) -> Result<LabelFunction> {
    alpha.check(cs)?;
    cs_check(group, cs)?;
    let rho_inv = group.inv(rho);
    let values = (0..cs.len())
        .map(|p| alpha.values[cs.act_on_position(group, rho_inv, p)])
        .collect();
    Ok(LabelFunction { values, n: alpha.n })
}

fn cs_check(group: &FiniteGroup, cs: &CosetSpace) -> Result<()> {
    if cs.group_order() != group.order() {
        return Err(GroupError::CosetMismatch { cosets_for: cs.group_order(), order: group.order() }.into());
    }
    Ok(())
}

pub fn stabilizer(group: &FiniteGroup, cs: &CosetSpace, alpha: &LabelFunction) -> Result<Subgroup> {
    alpha.check(cs)?;
    cs_check(group, cs)?;
    let mut members = Vec::new();
    for rho in 0..group.order() {
        if act(group, cs, rho, alpha)? == *alpha {
            members.push(rho);
        }
    }
    Ok(Subgroup::new(group, members)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    canonical_rep: LabelFunction,
    size: usize,
    stabilizer: Subgroup,
}

impl Orbit {
    /// Lexicographically least member.
    pub fn canonical_rep(&self) -> &LabelFunction {
        &self.canonical_rep
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Stabilizer of the canonical representative.
    pub fn stabilizer(&self) -> &Subgroup {
        &self.stabilizer
    }
}

/// The full set of orbits on `{G/H -> 1..n}`, sorted by canonical
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    n: u32,
    degree: usize,
    group_order: usize,
    orbits: Vec<Orbit>,
}

impl OrbitSet {
    pub fn alphabet(&self) -> u32 {
        self.n
    }

    /// Number of coset positions `[G:H]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Records for JSON output.
    pub fn records(&self) -> Vec<OrbitRecord> {
        self.orbits
            .iter()
            .map(|o| OrbitRecord {
                rep: o.canonical_rep.values.clone(),
                size: o.size,
                stab: o.stabilizer.members().to_vec(),
                stab_index: self.group_order / o.stabilizer.len(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub rep: Vec<u32>,
    pub size: usize,
    pub stab: Vec<usize>,
    pub stab_index: usize,
}

/// Number of label functions, `n^d`, if it fits in a `u64`.
fn function_count(n: u32, d: usize) -> Option<u64> {
    u32::try_from(d).ok().and_then(|d| (n as u64).checked_pow(d))
}

pub fn orbits(group: &FiniteGroup, cs: &CosetSpace, n: u32) -> Result<OrbitSet> {
    orbits_with_cap(group, cs, n, DEFAULT_ENUMERATION_CAP)
}

/// Orbit enumeration with an explicit cap on `n^[G:H]`.
///
/// Functions are encoded as base-`n` integers with position 0 most
/// significant, so numeric order is lexicographic order. Scanning codes in
/// increasing order, every unvisited code is the least member of a new orbit.
pub fn orbits_with_cap(group: &FiniteGroup, cs: &CosetSpace, n: u32, cap: u64) -> Result<OrbitSet> {
    if n == 0 {
        return Err(OrbitError::EmptyAlphabet);
    }
    cs_check(group, cs)?;
    let d = cs.len();
    let total = match function_count(n, d) {
        Some(t) if t <= cap => t,
        _ => {
            return Err(OrbitError::EnumerationCapExceeded {
                count: BigUint::from(n).pow(d as u32).to_string(),
                cap,
            })
        }
    };
    let action = coset_action(group, cs)?;
    // (rho . alpha)[p] = alpha[pull[rho][p]]
    let pull: Vec<&[usize]> = (0..group.order()).map(|rho| action.row(group.inv(rho))).collect();
    let base = n as u64;
    let mut weights = vec![1u64; d];
    for p in (0..d.saturating_sub(1)).rev() {
        weights[p] = weights[p + 1] * base;
    }

    let mut visited = vec![false; total as usize];
    let mut digits = vec![0u64; d];
    let mut orbits = Vec::new();
    for code in 0..total {
        if visited[code as usize] {
            continue;
        }
        let mut rest = code;
        for p in (0..d).rev() {
            digits[p] = rest % base;
            rest /= base;
        }
        let mut size = 0usize;
        let mut stab = Vec::new();
        for (rho, row) in pull.iter().enumerate() {
            let image: u64 = row.iter().zip(&weights).map(|(&src, &w)| digits[src] * w).sum();
            if image == code {
                stab.push(rho);
            }
            if !visited[image as usize] {
                visited[image as usize] = true;
                size += 1;
            }
        }
        let rep = LabelFunction { values: digits.iter().map(|&x| x as u32 + 1).collect(), n };
        let stabilizer = Subgroup::new(group, stab)?;
        debug_assert_eq!(size * stabilizer.len(), group.order());
        orbits.push(Orbit { canonical_rep: rep, size, stabilizer });
    }
    Ok(OrbitSet { n, degree: d, group_order: group.order(), orbits })
}

/// Orbit count `(1/|G|) * sum_rho n^c(rho)` where `c(rho)` is the number of
/// cycles of `rho` on the coset positions.
pub fn burnside_count(group: &FiniteGroup, cs: &CosetSpace, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(OrbitError::EmptyAlphabet);
    }
    let action = coset_action(group, cs)?;
    let base = BigUint::from(n);
    let mut sum = BigUint::zero();
    for rho in 0..group.order() {
        sum += base.pow(action.cycle_count(rho) as u32);
    }
    let order = BigUint::from(group.order());
    assert!((&sum % &order).is_zero(), "Burnside sum {sum} not divisible by |G| = {order}");
    Ok(sum / order)
}

/// `n^d` as a big integer.
pub fn function_count_big(n: u32, d: usize) -> BigUint {
    if d == 0 {
        return BigUint::one();
    }
    BigUint::from(n).pow(d as u32)
}
