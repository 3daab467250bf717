//! Finite groups on positional element indices, their subgroups, left
//! coset spaces and subgroup conjugacy.
//!
//! A [`FiniteGroup`] is a value: elements are the indices `0..order` and the
//! group law is a total binary table on them. Small groups given by an
//! explicit table store that table; the named families and permutation
//! groups evaluate the same table on demand, so `S8` does not need a
//! 40320 x 40320 array.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Largest group for which subgroup lattices are enumerated and for which
/// associativity is checked exhaustively.
pub const SMALL_GROUP_LIMIT: usize = 64;

/// Largest group any constructor will produce (`|S8|`).
pub const MAX_GROUP_ORDER: usize = 40_320;

/// Largest `n` accepted by `named_group("S", n)`.
pub const MAX_SYMMETRIC_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty or not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("unknown group family `{0}` (expected C, S or D)")]
    UnknownName(String),
    #[error("parameter {n} for family {family} is out of range (allowed 1..={max})")]
    ParameterTooLarge { family: String, n: usize, max: usize },
    #[error("group of order {order} exceeds the limit {limit} for this operation")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("coset space was built for a group of order {cosets_for}, not {order}")]
    CosetMismatch { cosets_for: usize, order: usize },
}

impl GroupError {
    pub fn code(&self) -> &'static str {
        match self {
            GroupError::NotSquare { .. } => "group.not_square",
            GroupError::EntryOutOfRange { .. } => "group.entry_out_of_range",
            GroupError::NotAssociative { .. } => "group.not_associative",
            GroupError::NoIdentity => "group.no_identity",
            GroupError::NoInverse { .. } => "group.no_inverse",
            GroupError::UnknownName(_) => "group.unknown_name",
            GroupError::ParameterTooLarge { .. } => "group.parameter_too_large",
            GroupError::GroupTooLarge { .. } => "group.group_too_large",
            GroupError::NotASubgroup(_) => "group.not_a_subgroup",
            GroupError::InvalidPermutation(_) => "group.invalid_permutation",
            GroupError::CosetMismatch { .. } => "group.coset_mismatch",
        }
    }

    /// Whether the error is a size cap rather than malformed input.
    pub fn is_cap(&self) -> bool {
        matches!(self, GroupError::ParameterTooLarge { .. } | GroupError::GroupTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Clone, Debug)]
enum Law {
    Table(Vec<u32>),
    Cyclic,
    /// Index `i < n` is `r^i`, index `n + i` is `r^i s`.
    Dihedral { n: usize },
    /// Elements are permutations of `0..degree` sorted lexicographically;
    /// `(a*b)(x) = a(b(x))`.
    Perm { perms: Vec<Vec<u8>>, index: HashMap<Vec<u8>, u32> },
}

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    inv: Vec<usize>,
    law: Law,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.law {
            Law::Table(_) => "table",
            Law::Cyclic => "cyclic",
            Law::Dihedral { .. } => "dihedral",
            Law::Perm { .. } => "permutation",
        };
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("law", &kind)
            .finish()
    }
}

/// Groups compare by their multiplication tables, whatever the storage.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order || self.identity != other.identity {
            return false;
        }
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == other.mul(a, b)))
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    ///
    /// Checks run in the order: shape, range, associativity, left identity,
    /// two-sided inverses. Associativity is exhaustive up to
    /// [`SMALL_GROUP_LIMIT`]; above it Light's test is run against a
    /// generating set.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::NotSquare { row: 0, len: 0, expected: 1 });
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::GroupTooLarge { order, limit: MAX_GROUP_ORDER });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: order });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange { row, col, value, order });
                }
                flat.push(value as u32);
            }
        }
        let m = |a: usize, b: usize| flat[a * order + b] as usize;

        if order <= SMALL_GROUP_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = m(a, b);
                    for c in 0..order {
                        if m(ab, c) != m(a, m(b, c)) {
                            return Err(GroupError::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| m(e, x) == x))
            .ok_or(GroupError::NoIdentity)?;

        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            let h = (0..order)
                .find(|&h| m(h, g) == identity && m(g, h) == identity)
                .ok_or(GroupError::NoInverse { element: g })?;
            inv[g] = h;
        }

        let group = FiniteGroup { order, identity, inv, law: Law::Table(flat) };
        if order > SMALL_GROUP_LIMIT {
            group.light_associativity_test()?;
        }
        Ok(group)
    }

    /// Light's test: a magma is associative if `(x*a)*y = x*(a*y)` for all
    /// `x, y` and every `a` in a generating set.
    fn light_associativity_test(&self) -> Result<()> {
        for a in self.generators() {
            for x in 0..self.order {
                let xa = self.mul(x, a);
                for y in 0..self.order {
                    if self.mul(xa, y) != self.mul(x, self.mul(a, y)) {
                        return Err(GroupError::NotAssociative { a: x, b: a, c: y });
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic group of order `n`; element `i` is `g^i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        check_param("C", n, MAX_GROUP_ORDER)?;
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Ok(FiniteGroup { order: n, identity: 0, inv, law: Law::Cyclic })
    }

    /// Dihedral group of order `2n`: rotations `r^i` first, then the
    /// reflections `r^i s`.
    pub fn dihedral(n: usize) -> Result<Self> {
        check_param("D", n, MAX_GROUP_ORDER / 2)?;
        let inv = (0..2 * n).map(|a| if a < n { (n - a) % n } else { a }).collect();
        Ok(FiniteGroup { order: 2 * n, identity: 0, inv, law: Law::Dihedral { n } })
    }

    /// Symmetric group on `n` points, elements in lexicographic order of
    /// their one-line notation (index 0 is the identity).
    pub fn symmetric(n: usize) -> Result<Self> {
        check_param("S", n, MAX_SYMMETRIC_DEGREE)?;
        let mut perms = Vec::new();
        let mut current: Vec<u8> = (0..n as u8).collect();
        loop {
            perms.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        Ok(Self::from_sorted_perms(perms))
    }

    /// Closure of a set of permutations of `0..degree` (all generators must
    /// have the same length). Elements are numbered in lexicographic order.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(1, Vec::len).max(1);
        if degree > u8::MAX as usize {
            return Err(GroupError::InvalidPermutation(format!("degree {degree} exceeds 255")));
        }
        let mut gens: Vec<Vec<u8>> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::InvalidPermutation(format!(
                    "expected length {degree}, got {}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(GroupError::InvalidPermutation(format!("{g:?} is not a bijection")));
                }
                seen[x] = true;
            }
            gens.push(g.iter().map(|&x| x as u8).collect());
        }
        let id: Vec<u8> = (0..degree as u8).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(p) = queue.pop() {
            for g in &gens {
                let q: Vec<u8> = g.iter().map(|&x| p[x as usize]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(GroupError::GroupTooLarge {
                            order: seen.len(),
                            limit: MAX_GROUP_ORDER,
                        });
                    }
                    queue.push(q);
                }
            }
        }
        let mut perms: Vec<Vec<u8>> = seen.into_iter().collect();
        perms.sort();
        Ok(Self::from_sorted_perms(perms))
    }

    fn from_sorted_perms(perms: Vec<Vec<u8>>) -> Self {
        let index: HashMap<Vec<u8>, u32> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let inv = perms
            .iter()
            .map(|p| {
                let mut q = vec![0u8; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    q[x as usize] = i as u8;
                }
                index[&q] as usize
            })
            .collect();
        FiniteGroup { order: perms.len(), identity: 0, inv, law: Law::Perm { perms, index } }
    }

    /// Direct product `a x b`; element `(x, y)` has index `x * |b| + y`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let order = a.order * b.order;
        const LIMIT: usize = 4096;
        if order > LIMIT {
            return Err(GroupError::GroupTooLarge { order, limit: LIMIT });
        }
        let table: Vec<Vec<usize>> = (0..order)
            .map(|g| {
                (0..order)
                    .map(|h| {
                        let x = a.mul(g / b.order, h / b.order);
                        let y = b.mul(g % b.order, h % b.order);
                        x * b.order + y
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Table(t) => t[a * self.order + b] as usize,
            Law::Cyclic => (a + b) % self.order,
            Law::Dihedral { n } => {
                let n = *n;
                let (ra, sa) = (a % n, a >= n);
                let (rb, sb) = (b % n, b >= n);
                let r = if sa { (ra + n - rb) % n } else { (ra + rb) % n };
                if sa != sb { n + r } else { r }
            }
            Law::Perm { perms, index } => {
                let (p, q) = (&perms[a], &perms[b]);
                let pq: Vec<u8> = q.iter().map(|&x| p[x as usize]).collect();
                index[&pq] as usize
            }
        }
    }

    /// `g h g^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv[g])
    }

    /// Full multiplication table. Intended for small groups (JSON echo, tests).
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Greedy generating set: scan elements in index order and keep each one
    /// that is not already generated by the previous picks.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        for g in 0..self.order {
            if !inside[g] {
                gens.push(g);
                for x in self.closure(&gens) {
                    inside[x] = true;
                }
            }
        }
        gens
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    /// Checks that `members` is a subgroup of this group.
    pub fn validate_subgroup(&self, members: &[usize]) -> Result<()> {
        if members.is_empty() {
            return Err(GroupError::NotASubgroup("empty member list".into()));
        }
        let mut inside = vec![false; self.order];
        for &x in members {
            if x >= self.order {
                return Err(GroupError::NotASubgroup(format!(
                    "element {x} out of range for order {}",
                    self.order
                )));
            }
            inside[x] = true;
        }
        if !inside[self.identity] {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in members {
            if !inside[self.inv[a]] {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in members {
                let ab = self.mul(a, b);
                if !inside[ab] {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} = {ab} missing")));
                }
            }
        }
        let size = inside.iter().filter(|&&b| b).count();
        if !self.order.is_multiple_of(size) {
            return Err(GroupError::NotASubgroup(format!(
                "size {size} does not divide {}",
                self.order
            )));
        }
        Ok(())
    }

    pub fn ensure_small(&self) -> Result<()> {
        if self.order > SMALL_GROUP_LIMIT {
            Err(GroupError::GroupTooLarge { order: self.order, limit: SMALL_GROUP_LIMIT })
        } else {
            Ok(())
        }
    }
}

fn check_param(family: &str, n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        Err(GroupError::ParameterTooLarge { family: family.to_string(), n, max })
    } else {
        Ok(())
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Builds one of the standard families: `C`/`cyclic`, `S`/`symmetric`, `D`/`dihedral`
/// (the dihedral family has order `2n`).
pub fn named_group(family: &str, n: usize) -> Result<FiniteGroup> {
    match family {
        "C" | "c" | "cyclic" => FiniteGroup::cyclic(n),
        "S" | "s" | "symmetric" => FiniteGroup::symmetric(n),
        "D" | "d" | "dihedral" => FiniteGroup::dihedral(n),
        other => Err(GroupError::UnknownName(other.to_string())),
    }
}

pub fn group_from_table(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    FiniteGroup::from_table(table)
}

/// A subgroup, stored as its sorted member indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        group.validate_subgroup(&members)?;
        Ok(Subgroup { members })
    }

    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Result<Self> {
        if let Some(&bad) = gens.iter().find(|&&g| g >= group.order()) {
            return Err(GroupError::NotASubgroup(format!("generator {bad} out of range")));
        }
        Ok(Subgroup { members: group.closure(gens) })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Subgroup { members: vec![group.identity()] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup { members: (0..group.order()).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn index_in(&self, group: &FiniteGroup) -> usize {
        group.order() / self.members.len()
    }

    /// Stable textual key, e.g. `"0,3"`.
    pub fn key(&self) -> String {
        self.members.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }

    /// `g S g^-1`.
    pub fn conjugate_by(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self.members.iter().map(|&h| group.conjugate(g, h)).collect();
        members.sort_unstable();
        Subgroup { members }
    }
}

/// Every subgroup of `group` exactly once, sorted by size then members.
///
/// Seeds are the subgroups generated by at most two elements; the rest are
/// reached by joining a found subgroup with one more element until no new
/// subgroup appears.
pub fn all_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    group.ensure_small()?;
    let n = group.order();
    let to_mask = |members: &[usize]| members.iter().fold(0u64, |m, &x| m | (1u64 << x));

    let mut found: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut work: Vec<u64> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let gens = if a == b { vec![a] } else { vec![a, b] };
            let mask = to_mask(&group.closure(&gens));
            if let std::collections::hash_map::Entry::Vacant(e) = found.entry(mask) {
                e.insert(gens);
                work.push(mask);
            }
        }
    }
    while let Some(mask) = work.pop() {
        let gens = found[&mask].clone();
        for g in 0..n {
            if mask & (1u64 << g) != 0 {
                continue;
            }
            let mut joined = gens.clone();
            joined.push(g);
            let m = to_mask(&group.closure(&joined));
            if let std::collections::hash_map::Entry::Vacant(e) = found.entry(m) {
                e.insert(joined);
                work.push(m);
            }
        }
    }
    let mut subgroups: Vec<Subgroup> = found
        .into_keys()
        .map(|mask| Subgroup { members: (0..n).filter(|&x| mask & (1u64 << x) != 0).collect() })
        .collect();
    subgroups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(subgroups)
}

/// Whether `s1` and `s2` are conjugate in `group`.
pub fn are_conjugate(group: &FiniteGroup, s1: &Subgroup, s2: &Subgroup) -> Result<bool> {
    group.validate_subgroup(s1.members())?;
    group.validate_subgroup(s2.members())?;
    if s1.len() != s2.len() {
        return Ok(false);
    }
    Ok((0..group.order()).any(|g| s1.conjugate_by(group, g) == *s2))
}

/// Lexicographically least member list among the conjugates of `s`.
pub fn canonical_conjugate(group: &FiniteGroup, s: &Subgroup) -> Result<Subgroup> {
    group.validate_subgroup(s.members())?;
    Ok(canonical_conjugate_unchecked(group, s))
}

pub(crate) fn canonical_conjugate_unchecked(group: &FiniteGroup, s: &Subgroup) -> Subgroup {
    // g S g^-1 depends only on the coset gS
    let mut seen = vec![false; group.order()];
    let mut best = s.clone();
    for g in 0..group.order() {
        if seen[g] {
            continue;
        }
        for &x in s.members() {
            seen[group.mul(g, x)] = true;
        }
        let c = s.conjugate_by(group, g);
        if c.members < best.members {
            best = c;
        }
    }
    best
}

/// The left cosets `gH`, ordered by their minimal element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
    reps: Vec<usize>,
    position_of: Vec<usize>,
}

impl CosetSpace {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    /// Minimal element of each coset.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Number of cosets, `[G:H]`.
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Position of the coset containing element `g`.
    pub fn position_of(&self, g: usize) -> usize {
        self.position_of[g]
    }

    pub fn group_order(&self) -> usize {
        self.position_of.len()
    }

    pub(crate) fn check_group(&self, group: &FiniteGroup) -> Result<()> {
        if self.group_order() != group.order() {
            return Err(GroupError::CosetMismatch {
                cosets_for: self.group_order(),
                order: group.order(),
            });
        }
        Ok(())
    }

    /// Position of `g * (coset p)`.
    pub fn act_on_position(&self, group: &FiniteGroup, g: usize, p: usize) -> usize {
        self.position_of[group.mul(g, self.reps[p])]
    }
}

pub fn left_cosets(group: &FiniteGroup, h: &Subgroup) -> Result<CosetSpace> {
    group.validate_subgroup(h.members())?;
    let mut position_of = vec![usize::MAX; group.order()];
    let mut cosets = Vec::new();
    let mut reps = Vec::new();
    for g in 0..group.order() {
        if position_of[g] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = h.members().iter().map(|&x| group.mul(g, x)).collect();
        coset.sort_unstable();
        for &x in &coset {
            position_of[x] = cosets.len();
        }
        reps.push(g);
        cosets.push(coset);
    }
    Ok(CosetSpace { subgroup: h.clone(), cosets, reps, position_of })
}

/// Permutation action of `group` on coset positions: `rows[g][p]` is the
/// position of `g * (coset p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetAction {
    rows: Vec<Vec<usize>>,
}

impl CosetAction {
    pub fn row(&self, g: usize) -> &[usize] {
        &self.rows[g]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Number of cycles of element `g` on the coset positions.
    pub fn cycle_count(&self, g: usize) -> usize {
        let row = &self.rows[g];
        let mut seen = vec![false; row.len()];
        let mut cycles = 0;
        for start in 0..row.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = row[p];
            }
        }
        cycles
    }
}

pub fn coset_action(group: &FiniteGroup, cs: &CosetSpace) -> Result<CosetAction> {
    cs.check_group(group)?;
    let rows = (0..group.order())
        .map(|g| (0..cs.len()).map(|p| cs.act_on_position(group, g, p)).collect())
        .collect();
    Ok(CosetAction { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> Vec<Vec<usize>> {
        FiniteGroup::symmetric(3).unwrap().table()
    }

    #[test]
    fn c2_from_table() {
        let g = group_from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn constant_rows_rejected() {
        let err = group_from_table(&[vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(
            matches!(err, GroupError::NotAssociative { .. } | GroupError::NoInverse { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn table_shape_errors() {
        assert!(matches!(
            group_from_table(&[vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            group_from_table(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::EntryOutOfRange { value: 2, .. })
        ));
        // x*y = x+y+1 mod 3 is a group with identity 2; x*y = x-y is not associative
        let sub: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + 3 - y) % 3).collect()).collect();
        assert!(matches!(group_from_table(&sub), Err(GroupError::NotAssociative { .. })));
        let shifted: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + y + 1) % 3).collect()).collect();
        assert_eq!(group_from_table(&shifted).unwrap().identity(), 2);
        // max(x, y) is associative with identity 0 but 1 has no inverse
        let max: Vec<Vec<usize>> = (0..2).map(|x| (0..2).map(|y| x.max(y)).collect()).collect();
        assert_eq!(group_from_table(&max), Err(GroupError::NoInverse { element: 1 }));
    }

    #[test]
    fn s3_table_roundtrip_has_two_generators() {
        let g = group_from_table(&s3_table()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.generators().len(), 2);
        assert_eq!(g, FiniteGroup::symmetric(3).unwrap());
    }

    #[test]
    fn named_groups() {
        assert_eq!(named_group("C", 2).unwrap().order(), 2);
        assert_eq!(named_group("S", 3).unwrap().order(), 6);
        assert_eq!(named_group("D", 4).unwrap().order(), 8);
        assert!(matches!(named_group("S", 20), Err(GroupError::ParameterTooLarge { .. })));
        assert!(matches!(named_group("C", 0), Err(GroupError::ParameterTooLarge { .. })));
        assert!(matches!(named_group("Q", 8), Err(GroupError::UnknownName(_))));
    }

    #[test]
    fn named_groups_satisfy_axioms() {
        for g in [
            FiniteGroup::cyclic(6).unwrap(),
            FiniteGroup::dihedral(1).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
        ] {
            let rebuilt = group_from_table(&g.table()).unwrap();
            assert_eq!(rebuilt, g);
        }
    }

    #[test]
    fn dihedral_relations() {
        let d = FiniteGroup::dihedral(4).unwrap();
        let (r, s) = (1, 4);
        // s r s = r^-1
        assert_eq!(d.mul(d.mul(s, r), s), 3);
        assert_eq!(d.mul(s, s), 0);
        assert_eq!(d.mul(r, s), 5);
    }

    #[test]
    fn symmetric_eight_is_lazy() {
        let s8 = FiniteGroup::symmetric(8).unwrap();
        assert_eq!(s8.order(), 40_320);
        let g = 12_345;
        assert_eq!(s8.mul(g, s8.inv(g)), 0);
    }

    #[test]
    fn permutation_generators() {
        let g = FiniteGroup::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(g, FiniteGroup::symmetric(3).unwrap());
        assert!(FiniteGroup::from_permutations(&[vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn direct_product_klein() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::direct_product(&c2, &c2).unwrap();
        assert_eq!(v.order(), 4);
        assert!((0..4).all(|x| v.mul(x, x) == 0));
    }

    #[test]
    fn subgroup_counts() {
        let count = |g: FiniteGroup| all_subgroups(&g).unwrap().len();
        assert_eq!(count(FiniteGroup::cyclic(2).unwrap()), 2);
        assert_eq!(count(FiniteGroup::symmetric(3).unwrap()), 6);
        assert_eq!(count(FiniteGroup::cyclic(4).unwrap()), 3);
        assert_eq!(count(FiniteGroup::dihedral(4).unwrap()), 10);
        assert_eq!(count(FiniteGroup::symmetric(4).unwrap()), 30);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::direct_product(&c2, &c2).unwrap();
        assert_eq!(count(v), 5);
    }

    #[test]
    fn s3_subgroup_sizes() {
        let subs = all_subgroups(&FiniteGroup::symmetric(3).unwrap()).unwrap();
        let sizes: Vec<usize> = subs.iter().map(Subgroup::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn subgroup_enumeration_cap() {
        let s5 = FiniteGroup::symmetric(5).unwrap();
        assert!(matches!(all_subgroups(&s5), Err(GroupError::GroupTooLarge { .. })));
    }

    #[test]
    fn subgroup_validation() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(Subgroup::new(&s3, vec![0, 1]).is_ok());
        assert!(matches!(Subgroup::new(&s3, vec![0, 3]), Err(GroupError::NotASubgroup(_))));
        assert!(matches!(Subgroup::new(&s3, vec![1]), Err(GroupError::NotASubgroup(_))));
    }

    #[test]
    fn coset_counts() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(left_cosets(&c2, &Subgroup::whole(&c2)).unwrap().len(), 1);
        assert_eq!(left_cosets(&c2, &Subgroup::trivial(&c2)).unwrap().len(), 2);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let h = Subgroup::new(&s3, vec![0, 1]).unwrap();
        let cs = left_cosets(&s3, &h).unwrap();
        assert_eq!(cs.len(), 3);
        for (coset, &rep) in cs.cosets().iter().zip(cs.reps()) {
            assert_eq!(coset[0], rep);
            assert_eq!(coset.len(), 2);
        }
    }

    #[test]
    fn coset_action_examples() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let cs = left_cosets(&c2, &Subgroup::trivial(&c2)).unwrap();
        let act = coset_action(&c2, &cs).unwrap();
        assert_eq!(act.row(0), &[0, 1]);
        assert_eq!(act.row(1), &[1, 0]);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let h = Subgroup::new(&s3, vec![0, 1]).unwrap();
        let cs = left_cosets(&s3, &h).unwrap();
        let act = coset_action(&s3, &cs).unwrap();
        for g in 0..6 {
            let fixed = (0..3).filter(|&p| act.row(g)[p] == p).count();
            let order = (1..=6).find(|&k| (0..k).fold(0, |x, _| s3.mul(x, g)) == 0).unwrap();
            let expected = match order {
                1 => 3,
                2 => 1,
                _ => 0,
            };
            assert_eq!(fixed, expected, "element {g}");
        }
        let wrong = FiniteGroup::cyclic(3).unwrap();
        assert!(matches!(coset_action(&wrong, &cs), Err(GroupError::CosetMismatch { .. })));
    }

    #[test]
    fn conjugacy() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let subs = all_subgroups(&s3).unwrap();
        let (a, b, c3) = (&subs[1], &subs[2], &subs[4]);
        assert!(are_conjugate(&s3, a, a).unwrap());
        assert!(are_conjugate(&s3, a, b).unwrap());
        assert!(!are_conjugate(&s3, c3, a).unwrap());
        let canon = canonical_conjugate(&s3, b).unwrap();
        assert_eq!(canon, canonical_conjugate(&s3, a).unwrap());
        assert!(canon.members() <= a.members() && canon.members() <= b.members());
    }
}
