//! Weierstrass gap sets and tabulated `h⁰` oracles.
//!
//! A [`RankTable`] records `h⁰(d_1 p_1 + ... + d_k p_k)` on the box
//! `-1 <= d_j <= m_j`. It is the only input the filtration recursion needs;
//! the semigroup itself is recovered from the table by [`members`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stratum::{Component, LiftedZero, QuadraticSignature};

/// Gaps of the Weierstrass semigroup of one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapSet {
    genus: u32,
    gaps: BTreeSet<u32>,
}

impl GapSet {
    /// Checks `|gaps| = g`, `1 ∈ gaps`, `max ≤ 2g-1` and additive closure of
    /// the complement (exhaustively up to `4g`).
    pub fn new(genus: u32, gaps: impl IntoIterator<Item = u32>) -> Result<Self> {
        let gaps: BTreeSet<u32> = gaps.into_iter().collect();
        if gaps.len() != genus as usize {
            return Err(Error::InvalidGapSet(format!("{} gaps for genus {genus}", gaps.len())));
        }
        if gaps.contains(&0) {
            return Err(Error::InvalidGapSet("0 is never a gap".into()));
        }
        if genus >= 1 {
            if !gaps.contains(&1) {
                return Err(Error::InvalidGapSet("1 must be a gap".into()));
            }
            let max = *gaps.iter().next_back().unwrap();
            if max > 2 * genus - 1 {
                return Err(Error::InvalidGapSet(format!(
                    "gap {max} exceeds 2g-1 = {}",
                    2 * genus - 1
                )));
            }
        }
        let set = GapSet { genus, gaps };
        if let Some((a, b)) = set.closure_violation(4 * genus) {
            return Err(Error::InvalidGapSet(format!(
                "{a} + {b} is a gap but both summands are not"
            )));
        }
        Ok(set)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn gaps(&self) -> &BTreeSet<u32> {
        &self.gaps
    }

    pub fn is_gap(&self, n: u32) -> bool {
        self.gaps.contains(&n)
    }

    /// Semigroup elements `0 <= s <= limit`.
    pub fn non_gaps_up_to(&self, limit: u32) -> Vec<u32> {
        (0..=limit).filter(|n| !self.is_gap(*n)).collect()
    }

    /// First pair of non-gaps `a <= b` with `a + b <= limit` summing to a gap.
    pub fn closure_violation(&self, limit: u32) -> Option<(u32, u32)> {
        let h = self.non_gaps_up_to(limit);
        for (i, &a) in h.iter().enumerate() {
            for &b in &h[i..] {
                if a + b > limit {
                    break;
                }
                if self.is_gap(a + b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.gaps.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Gap set at the zero of a differential in `ΩM_g(2g-2)` for a component
/// whose semigroup is known to be non-varying.
pub fn gaps_one_point(genus: u32, component: Component) -> Result<GapSet> {
    gaps_one_point_with(genus, component, false)
}

/// As [`gaps_one_point`]; `assume_generic` extends the spin components past
/// genus 5 with the gaps of a generic point.
pub fn gaps_one_point_with(genus: u32, component: Component, assume_generic: bool) -> Result<GapSet> {
    if genus == 0 {
        return Err(Error::InvalidGapSet("genus must be at least 1".into()));
    }
    let g = genus;
    match component {
        Component::Hyperelliptic => GapSet::new(g, (1..=g).map(|i| 2 * i - 1)),
        Component::Odd | Component::Even => {
            if g < 2 {
                return Err(Error::ComponentMismatch(format!(
                    "no {component} component in genus {g}"
                )));
            }
            if g > 5 && !assume_generic {
                return Err(Error::UnprovenRange {
                    genus: g,
                    component: component.to_string(),
                });
            }
            let gaps: Vec<u32> = if component == Component::Odd {
                (1..g).chain([2 * g - 1]).collect()
            } else {
                (1..=g - 2).chain([g, 2 * g - 1]).collect()
            };
            GapSet::new(g, gaps)
                .map_err(|e| Error::ComponentMismatch(format!("no {component} component in genus {g}: {e}")))
        }
        other => Err(Error::ComponentMismatch(format!(
            "no one-point gap set for component {other}"
        ))),
    }
}

/// `w(H) = Σ gaps − g(g+1)/2`.
pub fn weight(gs: &GapSet) -> u32 {
    let g = gs.genus;
    gs.gaps.iter().sum::<u32>() - g * (g + 1) / 2
}

/// `0 <= w(H) <= g(g-1)/2`, with equality exactly when `2 ∈ H`.
pub fn weight_bound_holds(gs: &GapSet) -> bool {
    let w = weight(gs);
    let max = gs.genus * gs.genus.saturating_sub(1) / 2;
    w <= max && ((w == max) == !gs.is_gap(2))
}

/// A lattice point `(d_1, ..., d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TupleIndex(pub Vec<i32>);

impl TupleIndex {
    pub fn zeros(k: usize) -> Self {
        TupleIndex(vec![0; k])
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &TupleIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - e_j`.
    pub fn step_down(&self, j: usize) -> TupleIndex {
        let mut v = self.0.clone();
        v[j] -= 1;
        TupleIndex(v)
    }

    pub fn step_up(&self, j: usize) -> TupleIndex {
        let mut v = self.0.clone();
        v[j] += 1;
        TupleIndex(v)
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }
}

impl fmt::Display for TupleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", items.join(","))
    }
}

const MAX_TABLE_CELLS: usize = 1 << 26;

/// `h⁰` values on the extended box `-1 <= d_j <= m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    bounds: Vec<u32>,
    strides: Vec<usize>,
    values: Vec<u32>,
}

fn domain_size(bounds: &[u32]) -> Result<usize> {
    bounds.iter().try_fold(1usize, |acc, &m| {
        acc.checked_mul(m as usize + 2)
            .filter(|&n| n <= MAX_TABLE_CELLS)
            .ok_or_else(|| Error::InvalidRankTable("table box too large".into()))
    })
}

fn strides_for(bounds: &[u32]) -> Vec<usize> {
    let mut strides = vec![1; bounds.len()];
    for j in (0..bounds.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * (bounds[j + 1] as usize + 2);
    }
    strides
}

/// Calls `f` on every tuple of the box `lo <= d_j <= bounds[j]` in
/// lexicographic order.
fn for_each_tuple(bounds: &[u32], lo: i32, mut f: impl FnMut(&[i32])) {
    let k = bounds.len();
    let mut d = vec![lo; k];
    loop {
        f(&d);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if d[j] < bounds[j] as i32 {
                d[j] += 1;
                break;
            }
            d[j] = lo;
        }
    }
}

impl RankTable {
    /// Offset of an in-box tuple of the right length.
    fn offset(&self, d: &[i32]) -> usize {
        d.iter().zip(&self.strides).map(|(&x, &s)| (x + 1) as usize * s).sum()
    }

    fn index(&self, d: &[i32]) -> Option<usize> {
        if d.len() != self.bounds.len() {
            return None;
        }
        let mut idx = 0;
        for ((&x, &m), &s) in d.iter().zip(&self.bounds).zip(&self.strides) {
            if x < -1 || x > m as i32 {
                return None;
            }
            idx += (x + 1) as usize * s;
        }
        Some(idx)
    }

    /// Builds a table from values listed in lexicographic order over the
    /// extended box, then checks the structural invariants.
    pub fn from_values(bounds: Vec<u32>, values: Vec<u32>) -> Result<Self> {
        let size = domain_size(&bounds)?;
        if values.len() != size {
            return Err(Error::InvalidRankTable(format!(
                "{} values for a domain of {size}",
                values.len()
            )));
        }
        let strides = strides_for(&bounds);
        let table = RankTable {
            bounds,
            strides,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    /// Table generated by a semigroup: `h⁰(d)` for `d >= 0` is the largest
    /// member rank below `d`; a tuple with `n` coordinates at `-1` gets the
    /// value at its clamp to `0` minus `n`, floored at `0`.
    pub fn from_semigroup(bounds: Vec<u32>, member_rank: impl Fn(&[i32]) -> Option<u32>) -> Result<Self> {
        let size = domain_size(&bounds)?;
        let k = bounds.len();
        let strides = strides_for(&bounds);
        let mut values = vec![0u32; size];
        // Lexicographic order visits d - e_j before d, so a single pass
        // computes the prefix maximum.
        let idx_of = |d: &[i32]| -> usize { d.iter().zip(&strides).map(|(&x, &s)| (x + 1) as usize * s).sum() };
        for_each_tuple(&bounds, 0, |d| {
            let here = idx_of(d);
            let mut best = member_rank(d).unwrap_or(0);
            for j in 0..k {
                if d[j] > 0 {
                    best = best.max(values[here - strides[j]]);
                }
            }
            values[here] = best;
        });
        for_each_tuple(&bounds, -1, |d| {
            let negatives = d.iter().filter(|&&x| x < 0).count();
            if negatives > 0 {
                let clamp: usize = d.iter().zip(&strides).map(|(&x, &s)| (x.max(0) + 1) as usize * s).sum();
                values[idx_of(d)] = values[clamp].saturating_sub(negatives as u32);
            }
        });
        let table = RankTable {
            bounds,
            strides,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    /// Box bounds `(m_1, ..., m_k)`.
    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn h0(&self, d: &[i32]) -> Option<u32> {
        self.index(d).map(|i| self.values[i])
    }

    pub fn h0_at(&self, d: &TupleIndex) -> Option<u32> {
        self.h0(&d.0)
    }

    pub fn top(&self) -> TupleIndex {
        TupleIndex(self.bounds.iter().map(|&m| m as i32).collect())
    }

    /// `h⁰` at the top corner of the box.
    pub fn genus(&self) -> u32 {
        self.h0_at(&self.top()).unwrap()
    }

    /// Every tuple of the extended box with its value, lexicographically.
    pub fn entries(&self) -> Vec<(TupleIndex, u32)> {
        let mut out = Vec::with_capacity(self.values.len());
        for_each_tuple(&self.bounds, -1, |d| {
            out.push((TupleIndex(d.to_vec()), self.h0(d).unwrap()));
        });
        out
    }

    /// `h⁰(0) = 1`, `h⁰(-1, ..., -1) = 0`, and every unit step raises `h⁰`
    /// by 0 or 1.
    pub fn validate(&self) -> Result<()> {
        let k = self.dim();
        if self.h0(&vec![0; k]) != Some(1) {
            return Err(Error::InvalidRankTable("h0(0) must be 1".into()));
        }
        if k > 0 && self.h0(&vec![-1; k]) != Some(0) {
            return Err(Error::InvalidRankTable("h0(-1,...,-1) must be 0".into()));
        }
        let mut bad = None;
        for_each_tuple(&self.bounds, -1, |d| {
            if bad.is_some() {
                return;
            }
            let i = self.offset(d);
            let here = self.values[i];
            for j in 0..k {
                if d[j] < self.bounds[j] as i32 {
                    let there = self.values[i + self.strides[j]];
                    if there != here && there != here + 1 {
                        bad = Some(TupleIndex(d.to_vec()));
                    }
                }
            }
        });
        match bad {
            Some(d) => Err(Error::InvalidRankTable(format!("non-monotone step from {d}"))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RankTableWire::from(self)).expect("rank table serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let wire: RankTableWire =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("rank table json: {e}")))?;
        wire.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct RankTableWire {
    #[serde(rename = "box")]
    bounds: Vec<u32>,
    values: Vec<RankEntry>,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    d: Vec<i32>,
    h0: u32,
}

impl From<&RankTable> for RankTableWire {
    fn from(t: &RankTable) -> Self {
        RankTableWire {
            bounds: t.bounds.clone(),
            values: t
                .entries()
                .into_iter()
                .map(|(d, h0)| RankEntry { d: d.0, h0 })
                .collect(),
        }
    }
}

impl TryFrom<RankTableWire> for RankTable {
    type Error = Error;

    fn try_from(w: RankTableWire) -> Result<Self> {
        let size = domain_size(&w.bounds)?;
        let strides = strides_for(&w.bounds);
        let mut values = vec![None; size];
        let shell = RankTable {
            bounds: w.bounds.clone(),
            strides: strides.clone(),
            values: Vec::new(),
        };
        for e in w.values {
            let i = shell
                .index(&e.d)
                .ok_or_else(|| Error::InvalidRankTable(format!("tuple {:?} outside the box", e.d)))?;
            if values[i].replace(e.h0).is_some() {
                return Err(Error::InvalidRankTable(format!("tuple {:?} listed twice", e.d)));
            }
        }
        let values: Option<Vec<u32>> = values.into_iter().collect();
        let values = values.ok_or_else(|| Error::InvalidRankTable("missing tuples".into()))?;
        RankTable::from_values(w.bounds, values)
    }
}

/// One-point table on the box `(2g-2)`: `h⁰(dp)` counts the non-gaps in
/// `[0, d]`.
pub fn rank_table_one_point(gs: &GapSet) -> RankTable {
    let top = 2 * gs.genus() - 2;
    let mut values = Vec::with_capacity(top as usize + 2);
    values.push(0);
    let mut count = 0;
    for d in 0..=top {
        if !gs.is_gap(d) {
            count += 1;
        }
        values.push(count);
    }
    RankTable::from_values(vec![top], values).expect("gap sets give valid tables")
}

/// Table of the non-varying subsemigroup on the hyperelliptic double cover:
/// Weierstrass coordinates take even values, conjugate pairs move together,
/// and each unit of the `g¹₂` raises `h⁰` by one.
pub fn rank_table_hyperelliptic(sig: &QuadraticSignature) -> RankTable {
    let lifted = sig.lifted_zeros();
    let bounds: Vec<u32> = lifted.iter().map(LiftedZero::order).collect();
    let member_rank = |d: &[i32]| -> Option<u32> {
        let mut rank = 1u32;
        let mut j = 0;
        while j < lifted.len() {
            match lifted[j] {
                LiftedZero::Weierstrass { .. } => {
                    if d[j] % 2 != 0 {
                        return None;
                    }
                    rank += d[j] as u32 / 2;
                    j += 1;
                }
                LiftedZero::ConjugatePair { .. } => {
                    if d[j] != d[j + 1] {
                        return None;
                    }
                    rank += d[j] as u32;
                    j += 2;
                }
            }
        }
        Some(rank)
    };
    RankTable::from_semigroup(bounds, member_rank).expect("hyperelliptic tables are valid")
}

/// Tuples `0 <= d <= m` where `h⁰` jumps by one in every coordinate.
pub fn members(rt: &RankTable) -> BTreeSet<TupleIndex> {
    let mut out = BTreeSet::new();
    for_each_tuple(rt.bounds(), 0, |d| {
        let i = rt.offset(d);
        let here = rt.values[i];
        let jumps = rt.strides.iter().all(|&s| rt.values[i - s] + 1 == here);
        if jumps {
            out.insert(TupleIndex(d.to_vec()));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i32]) -> TupleIndex {
        TupleIndex(v.to_vec())
    }

    #[test]
    fn one_point_gap_sets() {
        let hyp = gaps_one_point(3, Component::Hyperelliptic).unwrap();
        assert_eq!(hyp.gaps().iter().copied().collect::<Vec<_>>(), vec![1, 3, 5]);
        let even = gaps_one_point(4, Component::Even).unwrap();
        assert_eq!(even.gaps().iter().copied().collect::<Vec<_>>(), vec![1, 2, 4, 7]);
        let odd = gaps_one_point(4, Component::Odd).unwrap();
        assert_eq!(odd.gaps().iter().copied().collect::<Vec<_>>(), vec![1, 2, 3, 7]);
        let one = gaps_one_point(1, Component::Hyperelliptic).unwrap();
        assert_eq!(one.gaps().iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn spin_gaps_outside_proven_range() {
        assert!(matches!(
            gaps_one_point(6, Component::Odd),
            Err(Error::UnprovenRange { genus: 6, .. })
        ));
        let g6 = gaps_one_point_with(6, Component::Even, true).unwrap();
        assert_eq!(g6.gaps().len(), 6);
        // genus 2 has no even component of (2)
        assert!(gaps_one_point(2, Component::Even).is_err());
        assert!(gaps_one_point(3, Component::NonHyperelliptic).is_err());
    }

    #[test]
    fn gap_set_validation() {
        assert!(GapSet::new(3, [1, 2, 3]).is_ok());
        assert!(GapSet::new(3, [1, 2]).is_err());
        assert!(GapSet::new(3, [2, 3, 4]).is_err());
        assert!(GapSet::new(3, [1, 2, 7]).is_err());
        // {1,2,5}: non-gaps 3,4 ... fine; {1,3,4}: 2+2 = 4 is a gap
        assert!(GapSet::new(3, [1, 2, 5]).is_ok());
        assert!(GapSet::new(3, [1, 3, 4]).is_err());
    }

    #[test]
    fn weights() {
        let w = |g, gaps: &[u32]| weight(&GapSet::new(g, gaps.iter().copied()).unwrap());
        assert_eq!(w(3, &[1, 3, 5]), 3);
        assert_eq!(w(3, &[1, 2, 3]), 0);
        assert_eq!(w(4, &[1, 2, 3, 7]), 3);
        assert!(weight_bound_holds(&GapSet::new(3, [1, 3, 5]).unwrap()));
        assert!(weight_bound_holds(&GapSet::new(4, [1, 2, 3, 7]).unwrap()));
    }

    #[test]
    fn one_point_table_values() {
        let rt = rank_table_one_point(&GapSet::new(3, [1, 3, 5]).unwrap());
        assert_eq!(rt.bounds(), &[4]);
        assert_eq!(rt.h0(&[4]), Some(3));
        assert_eq!(rt.h0(&[0]), Some(1));
        assert_eq!(rt.h0(&[-1]), Some(0));
        let even = rank_table_one_point(&GapSet::new(4, [1, 2, 4, 7]).unwrap());
        assert_eq!(even.h0(&[6]), Some(4));
        assert_eq!(even.h0(&[5]), Some(3));
        assert_eq!(even.h0(&[3]), Some(2));
        assert_eq!(even.h0(&[7]), None);
        assert_eq!(even.genus(), 4);
    }

    #[test]
    fn one_point_members_are_non_gaps() {
        let gs = GapSet::new(3, [1, 3, 5]).unwrap();
        let m = members(&rank_table_one_point(&gs));
        assert_eq!(m, [t(&[0]), t(&[2]), t(&[4])].into_iter().collect());
    }

    #[test]
    fn hyperelliptic_tables() {
        let rt = rank_table_hyperelliptic(&"3,-1x7".parse().unwrap());
        assert_eq!(rt.bounds(), &[4]);
        assert_eq!(rt.h0(&[3]), Some(2));
        let gs = GapSet::new(3, [1, 3, 5]).unwrap();
        assert_eq!(rt, rank_table_one_point(&gs));

        let rt = rank_table_hyperelliptic(&"6,-1x10".parse().unwrap());
        assert_eq!(rt.bounds(), &[3, 3]);
        assert_eq!(rt.h0(&[2, 2]), Some(3));
        assert_eq!(rt.h0(&[2, 1]), Some(2));
        assert_eq!(rt.genus(), 4);
        assert_eq!(
            members(&rt),
            [t(&[0, 0]), t(&[1, 1]), t(&[2, 2]), t(&[3, 3])].into_iter().collect()
        );

        let rt = rank_table_hyperelliptic(&"2,2,-1x8".parse().unwrap());
        assert_eq!(rt.bounds(), &[1, 1, 1, 1]);
        assert_eq!(rt.h0(&[1, 1, 1, 1]), Some(3));
        assert_eq!(
            members(&rt),
            [t(&[0, 0, 0, 0]), t(&[0, 0, 1, 1]), t(&[1, 1, 0, 0]), t(&[1, 1, 1, 1])]
                .into_iter()
                .collect()
        );
    }

    #[test]
    fn base_point_membership_tracks_minus_one_values() {
        let rt = rank_table_hyperelliptic(&"6,-1x10".parse().unwrap());
        assert!(members(&rt).contains(&t(&[0, 0])));
        assert_eq!(rt.h0(&[-1, 0]), Some(0));
        assert_eq!(rt.h0(&[-1, -1]), Some(0));
    }

    #[test]
    fn json_shape_and_roundtrip() {
        let rt = rank_table_one_point(&GapSet::new(2, [1, 3]).unwrap());
        let j = rt.to_json();
        assert_eq!(
            j,
            serde_json::json!({
                "box": [2],
                "values": [
                    {"d": [-1], "h0": 0},
                    {"d": [0], "h0": 1},
                    {"d": [1], "h0": 1},
                    {"d": [2], "h0": 2}
                ]
            })
        );
        assert_eq!(RankTable::from_json(&j).unwrap(), rt);
    }

    #[test]
    fn rejects_broken_tables() {
        assert!(RankTable::from_values(vec![2], vec![0, 1, 3, 3]).is_err());
        assert!(RankTable::from_values(vec![2], vec![0, 2, 2, 3]).is_err());
        assert!(RankTable::from_values(vec![2], vec![0, 1, 1]).is_err());
        let dup = serde_json::json!({"box": [0], "values": [{"d": [0], "h0": 1}, {"d": [0], "h0": 1}]});
        assert!(RankTable::from_json(&dup).is_err());
    }
}
