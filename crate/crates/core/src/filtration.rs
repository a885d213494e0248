//! Weierstrass filtrations of the Hodge bundle and their exponents.
//!
//! Four routes produce a [`Filtration`]:
//! - [`one_section_exponents`] for `ΩM_g(2g-2)` from the one-point gap set,
//! - [`hyperelliptic_exponents`] from a quadratic signature,
//! - [`hn_construct`], the level recursion over an arbitrary [`RankTable`],
//! - [`low_genus_exponents`], transcribed splittings for low genus strata.
//!
//! Degrees are in units of `deg 𝓛`; a section step `O_{D_i}(d D_i)` has
//! degree `-d/(m_i+1)` and contributes the exponent `1 - d/(m_i+1)`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semigroup::{gaps_one_point_with, members, RankTable, TupleIndex};
use crate::stratum::{hyperelliptic_signature, render_zeros, Component, LiftedZero, QuadraticSignature, Stratum};

/// Descriptor of a graded quotient. Section indices are 1-based, as in
/// `D_1, ..., D_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepLabel {
    /// The maximal-Higgs line bundle `𝓛`; exponent exactly 1.
    Higgs,
    /// `O_{D_i}(d D_i)`.
    Section { section: usize, multiplicity: u32 },
    /// Quotient `O_{Q_j}(2k Q_j)` at the Weierstrass zero over singularity
    /// `j`.
    WeierstrassMultiple { singularity: usize, section: usize, k: u32 },
    /// Quotient `O_{P_2j}(k (P_1j + P_2j))` at a conjugate pair.
    ConjugatePair { singularity: usize, section: usize, k: u32 },
    /// Weierstrass pair step `f_*O(lower) ⊂ f_*O(upper)` with quotient
    /// supported on the single section where the two tuples differ.
    Pair { lower: TupleIndex, upper: TupleIndex },
}

impl StepLabel {
    /// Section carrying the quotient, `None` for the Higgs step.
    pub fn section(&self) -> Option<usize> {
        match self {
            StepLabel::Higgs => None,
            StepLabel::Section { section, .. }
            | StepLabel::WeierstrassMultiple { section, .. }
            | StepLabel::ConjugatePair { section, .. } => Some(*section),
            StepLabel::Pair { lower, upper } => lower
                .as_slice()
                .iter()
                .zip(upper.as_slice())
                .position(|(a, b)| a != b)
                .map(|j| j + 1),
        }
    }

    /// `d` in `O_{D_i}(d D_i)`.
    pub fn multiplicity(&self) -> u32 {
        match self {
            StepLabel::Higgs => 0,
            StepLabel::Section { multiplicity, .. } => *multiplicity,
            StepLabel::WeierstrassMultiple { k, .. } => 2 * k,
            StepLabel::ConjugatePair { k, .. } => *k,
            StepLabel::Pair { upper, .. } => {
                let j = self.section().expect("pair step moves one coordinate") - 1;
                upper.as_slice()[j] as u32
            }
        }
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Higgs => f.write_str("L"),
            StepLabel::Section {
                section: i,
                multiplicity: d,
            } => write!(f, "O_{{D_{i}}}({d}D_{i})"),
            StepLabel::WeierstrassMultiple { singularity, k, .. } => {
                let j = singularity + 1;
                write!(f, "O_{{Q_{j}}}({}Q_{j})", 2 * k)
            }
            StepLabel::ConjugatePair { singularity, k, .. } => {
                let j = singularity + 1;
                write!(f, "O_{{P_{{2,{j}}}}}({k}(P_{{1,{j}}}+P_{{2,{j}}}))")
            }
            StepLabel::Pair { lower, upper } => write!(f, "{{{lower},{upper}}}"),
        }
    }
}

/// A graded quotient `V_i / V_{i-1}` and its degree over `deg 𝓛`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStep {
    pub label: StepLabel,
    pub degree: Rational,
}

impl QuotientStep {
    pub fn higgs() -> Self {
        QuotientStep {
            label: StepLabel::Higgs,
            degree: Rational::zero(),
        }
    }

    /// Builds a step whose degree is `-d/(m+1)` for the section order `m`.
    pub fn on_section(label: StepLabel, section_order: u32) -> Self {
        let degree = Rational::new(-i64::from(label.multiplicity()), i64::from(section_order) + 1);
        QuotientStep { label, degree }
    }

    pub fn exponent(&self) -> Rational {
        Rational::one() + self.degree
    }
}

impl Serialize for QuotientStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("QuotientStep", 4)?;
        s.serialize_field("section", &self.label.section())?;
        s.serialize_field("multiplicity", &self.label.multiplicity())?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("label", &self.label.to_string())?;
        s.end()
    }
}

/// An ordered filtration `0 ⊂ V_1 ⊂ ... ⊂ V_g` with line-bundle quotients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub genus: u32,
    /// Orders of the sections the steps refer to.
    pub zeros: Vec<u32>,
    pub exponents: Vec<Rational>,
    pub steps: Vec<QuotientStep>,
    /// A direct-sum splitting into line bundles is known.
    pub splits: bool,
}

impl Filtration {
    /// Sorts the steps by descending exponent (stable, so equal exponents
    /// keep their input order) and checks every invariant.
    pub fn from_unsorted(genus: u32, zeros: Vec<u32>, mut steps: Vec<QuotientStep>, splits: bool) -> Result<Self> {
        steps.sort_by_key(|s| Reverse(s.exponent()));
        Self::from_ordered(genus, zeros, steps, splits)
    }

    pub fn from_ordered(genus: u32, zeros: Vec<u32>, steps: Vec<QuotientStep>, splits: bool) -> Result<Self> {
        let exponents = steps.iter().map(QuotientStep::exponent).collect();
        let f = Filtration {
            genus,
            zeros,
            exponents,
            steps,
            splits,
        };
        f.check()?;
        Ok(f)
    }

    /// Length `g`, leading Higgs step, exponents in `(0, 1]`, non-increasing,
    /// ties only across different sections, and section degrees of the form
    /// `-d/(m_i+1)` with `0 < d <= m_i`.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidRankTable(msg));
        if self.steps.len() != self.genus as usize || self.exponents.len() != self.steps.len() {
            return fail(format!(
                "filtration has {} steps for genus {}",
                self.steps.len(),
                self.genus
            ));
        }
        if self.steps.first().map(|s| &s.label) != Some(&StepLabel::Higgs) {
            return fail("first step must be the maximal-Higgs line".into());
        }
        for step in &self.steps[1..] {
            let Some(i) = step.label.section() else {
                return fail("only the first step may be the Higgs line".into());
            };
            let Some(&m) = self.zeros.get(i - 1) else {
                return fail(format!("step {} refers to a missing section", step.label));
            };
            let d = step.label.multiplicity();
            if d == 0 || d > m || step.degree != Rational::new(-i64::from(d), i64::from(m) + 1) {
                return fail(format!("step {} has an inconsistent degree", step.label));
            }
        }
        for (level, pair) in self.steps.windows(2).enumerate() {
            let (a, b) = (pair[0].exponent(), pair[1].exponent());
            if b > a {
                return Err(Error::NotDecreasing { level: level + 2 });
            }
            if a == b && level > 0 && pair[0].label.section() == pair[1].label.section() {
                return Err(Error::NotDecreasing { level: level + 2 });
            }
        }
        if self.exponents.iter().any(|w| !w.is_positive() || *w > Rational::one()) {
            return fail("exponent outside (0, 1]".into());
        }
        Ok(())
    }

    pub fn sum(&self) -> Rational {
        self.exponents.iter().sum()
    }
}

/// Exponents `i/(2g-1)` for `i` in the one-point gap set.
pub fn one_section_exponents(genus: u32, component: Component) -> Result<Filtration> {
    one_section_exponents_with(genus, component, false)
}

pub fn one_section_exponents_with(genus: u32, component: Component, assume_generic: bool) -> Result<Filtration> {
    let gaps = gaps_one_point_with(genus, component, assume_generic)?;
    let top = 2 * genus - 1;
    let zeros = if genus == 1 { Vec::new() } else { vec![top - 1] };
    // gap i ↔ semigroup element 2g-1-i, the multiplicity of the step
    let steps = gaps
        .gaps()
        .iter()
        .rev()
        .map(|&i| match top - i {
            0 => QuotientStep::higgs(),
            d => QuotientStep::on_section(
                StepLabel::Section {
                    section: 1,
                    multiplicity: d,
                },
                top - 1,
            ),
        })
        .collect();
    let splits = component == Component::Odd && genus <= 5;
    Filtration::from_ordered(genus, zeros, steps, splits)
}

/// Exponents `1` and `1 - 2k/(d_j+2)` for `0 < 2k <= d_j + 1`, sorted.
pub fn hyperelliptic_exponents(sig: &QuadraticSignature) -> Result<Filtration> {
    let lifted = sig.lifted_zeros();
    let zeros: Vec<u32> = lifted.iter().map(LiftedZero::order).collect();
    let genus = 1 + zeros.iter().sum::<u32>() / 2;
    let mut steps = vec![QuotientStep::higgs()];
    let mut coord = 0;
    while coord < lifted.len() {
        match lifted[coord] {
            LiftedZero::Weierstrass { singularity, order } => {
                for k in 1..=order / 2 {
                    let label = StepLabel::WeierstrassMultiple {
                        singularity,
                        section: coord + 1,
                        k,
                    };
                    steps.push(QuotientStep::on_section(label, order));
                }
                coord += 1;
            }
            LiftedZero::ConjugatePair { singularity, order } => {
                // 2k <= d + 1 with d = 2·order
                for k in 1..=order {
                    let label = StepLabel::ConjugatePair {
                        singularity,
                        section: coord + 2,
                        k,
                    };
                    steps.push(QuotientStep::on_section(label, order));
                }
                coord += 2;
            }
        }
    }
    Filtration::from_unsorted(genus, zeros, steps, false)
}

/// `l(d) = min_j -d_j/(m_j+1)`; zero for the empty tuple.
fn length(d: &TupleIndex, bounds: &[u32]) -> Rational {
    d.as_slice()
        .iter()
        .zip(bounds)
        .map(|(&x, &m)| Rational::new(-i64::from(x), i64::from(m) + 1))
        .min()
        .unwrap_or_else(Rational::zero)
}

/// Coordinates attaining `l(d)`, with `d_j > 0`.
fn minimizing_coordinates(d: &TupleIndex, bounds: &[u32]) -> Vec<usize> {
    let l = length(d, bounds);
    (0..bounds.len())
        .filter(|&j| {
            let x = d.as_slice()[j];
            x > 0 && Rational::new(-i64::from(x), i64::from(bounds[j]) + 1) == l
        })
        .collect()
}

struct Recursion<'a> {
    table: &'a RankTable,
    members: Vec<TupleIndex>,
}

impl<'a> Recursion<'a> {
    fn new(table: &'a RankTable) -> Self {
        Recursion {
            table,
            members: members(table).into_iter().collect(),
        }
    }

    /// `L(a)`: members below `a` with the same `h⁰`.
    fn same_pushforward(&self, a: &TupleIndex) -> Vec<TupleIndex> {
        let target = self.table.h0_at(a);
        self.members
            .iter()
            .filter(|d| (*d).le(a) && self.table.h0_at(d) == target)
            .cloned()
            .collect()
    }

    fn bounds(&self) -> &[u32] {
        self.table.bounds()
    }
}

/// Harder–Narasimhan filtration from a rank table by the level recursion
/// `L_g = {m}`, `L_{i-1} = ∪ L(d - e_j)` over `d ∈ L_i` and `j` attaining
/// `l_i = min_{L_i} l`.
///
/// The reported chain takes, at each level, the lexicographically smallest
/// minimizing coordinate and then the smallest minimizing tuple.
pub fn hn_construct(rt: &RankTable) -> Result<Filtration> {
    let rec = Recursion::new(rt);
    let bounds = rec.bounds().to_vec();
    let genus = rt.genus();
    let top = rt.top();
    if !rec.members.contains(&top) {
        return Err(Error::EmptyLevel { level: genus as usize });
    }

    // levels[i] = L_{i+1}, built from the top down
    let mut levels: Vec<BTreeSet<TupleIndex>> = vec![BTreeSet::new(); genus as usize];
    let mut lengths = vec![Rational::zero(); genus as usize];
    levels[genus as usize - 1].insert(top.clone());
    for level in (1..=genus as usize).rev() {
        let current = &levels[level - 1];
        if current.is_empty() {
            return Err(Error::EmptyLevel { level });
        }
        if current.iter().any(|d| rt.h0_at(d) != Some(level as u32)) {
            return Err(Error::InvalidRankTable(format!(
                "level {level} holds a tuple of the wrong rank"
            )));
        }
        let l = current.iter().map(|d| length(d, &bounds)).min().unwrap();
        lengths[level - 1] = l;
        if level == 1 {
            break;
        }
        let mut next = BTreeSet::new();
        for d in current.iter().filter(|d| length(d, &bounds) == l) {
            for j in minimizing_coordinates(d, &bounds) {
                next.extend(rec.same_pushforward(&d.step_down(j)));
            }
        }
        levels[level - 2] = next;
    }
    if !lengths[0].is_zero() {
        return Err(Error::InvalidRankTable("bottom level does not reach the origin".into()));
    }
    for level in 2..=genus as usize {
        if lengths[level - 1] > lengths[level - 2] {
            return Err(Error::NotDecreasing { level });
        }
    }

    // deterministic chain for the step labels
    let mut steps = Vec::with_capacity(genus as usize);
    let mut current = top;
    for level in (2..=genus as usize).rev() {
        let l = lengths[level - 1];
        let j = *minimizing_coordinates(&current, &bounds)
            .first()
            .filter(|_| length(&current, &bounds) == l)
            .ok_or(Error::EmptyLevel { level })?;
        steps.push(QuotientStep::on_section(
            StepLabel::Section {
                section: j + 1,
                multiplicity: current.as_slice()[j] as u32,
            },
            bounds[j],
        ));
        let want = lengths[level - 2];
        current = rec
            .same_pushforward(&current.step_down(j))
            .into_iter()
            .find(|e| length(e, &bounds) == want)
            .ok_or(Error::EmptyLevel { level: level - 1 })?;
    }
    steps.push(QuotientStep::higgs());
    steps.reverse();
    Filtration::from_ordered(genus, bounds, steps, false)
}

/// Explores every branch choice of the recursion: each chain picks any tuple
/// of `L(d - e_j)` attaining its minimal length and any minimizing `j`.
/// Returns the set of exponent multisets (sorted descending) over all chains.
pub fn hn_all_exponent_multisets(rt: &RankTable) -> Result<BTreeSet<Vec<Rational>>> {
    let rec = Recursion::new(rt);
    let bounds = rec.bounds().to_vec();
    let top = rt.top();
    if !rec.members.contains(&top) {
        return Err(Error::EmptyLevel {
            level: rt.genus() as usize,
        });
    }
    let mut memo: BTreeMap<TupleIndex, BTreeSet<Vec<Rational>>> = BTreeMap::new();
    let tails = explore(&rec, &bounds, &top, &mut memo)?;
    Ok(tails
        .into_iter()
        .map(|mut degrees| {
            degrees.sort_by_key(|&d| Reverse(d));
            degrees.into_iter().map(|d| Rational::one() + d).collect()
        })
        .collect())
}

fn explore(
    rec: &Recursion<'_>,
    bounds: &[u32],
    d: &TupleIndex,
    memo: &mut BTreeMap<TupleIndex, BTreeSet<Vec<Rational>>>,
) -> Result<BTreeSet<Vec<Rational>>> {
    if let Some(hit) = memo.get(d) {
        return Ok(hit.clone());
    }
    let l = length(d, bounds);
    let mut out = BTreeSet::new();
    if rec.table.h0_at(d) == Some(1) {
        out.insert(vec![l]);
    } else {
        let level = rec.table.h0_at(d).unwrap_or(0) as usize;
        for j in minimizing_coordinates(d, bounds) {
            let candidates = rec.same_pushforward(&d.step_down(j));
            let Some(best) = candidates.iter().map(|e| length(e, bounds)).min() else {
                return Err(Error::EmptyLevel { level: level - 1 });
            };
            for e in candidates.iter().filter(|e| length(e, bounds) == best) {
                for mut tail in explore(rec, bounds, e, memo)? {
                    tail.push(l);
                    out.insert(tail);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyLevel { level: level - 1 });
        }
    }
    memo.insert(d.clone(), out.clone());
    Ok(out)
}

/// Splitting data for one low-genus stratum: `(section, multiplicity)` per
/// non-Higgs summand, sections 1-based in descending zero order.
struct Splitting {
    genus: u32,
    zeros: &'static [u32],
    components: &'static [Component],
    summands: &'static [(usize, u32)],
}

const UNTAGGED: &[Component] = &[Component::Unspecified, Component::NonHyperelliptic];

const SPLITTINGS: &[Splitting] = &[
    Splitting {
        genus: 3,
        zeros: &[3, 1],
        components: UNTAGGED,
        summands: &[(1, 3), (2, 1)],
    },
    Splitting {
        genus: 3,
        zeros: &[2, 2],
        components: &[Component::Odd],
        summands: &[(1, 2), (2, 2)],
    },
    Splitting {
        genus: 3,
        zeros: &[2, 1, 1],
        components: UNTAGGED,
        summands: &[(1, 2), (2, 1)],
    },
    Splitting {
        genus: 4,
        zeros: &[5, 1],
        components: UNTAGGED,
        summands: &[(1, 5), (1, 4), (2, 1)],
    },
    Splitting {
        genus: 4,
        zeros: &[4, 2],
        components: &[Component::Odd],
        summands: &[(1, 4), (1, 3), (2, 2)],
    },
    Splitting {
        genus: 4,
        zeros: &[3, 3],
        components: &[Component::NonHyperelliptic],
        summands: &[(1, 3), (2, 3), (2, 2)],
    },
    Splitting {
        genus: 4,
        zeros: &[2, 2, 2],
        components: &[Component::Odd],
        summands: &[(1, 2), (2, 2), (3, 2)],
    },
    Splitting {
        genus: 4,
        zeros: &[3, 2, 1],
        components: UNTAGGED,
        summands: &[(1, 3), (1, 2), (2, 2)],
    },
    Splitting {
        genus: 5,
        zeros: &[5, 3],
        components: UNTAGGED,
        summands: &[(1, 5), (1, 4), (2, 3), (2, 2)],
    },
    Splitting {
        genus: 5,
        zeros: &[6, 2],
        components: &[Component::Odd],
        summands: &[(1, 6), (1, 5), (1, 4), (2, 2)],
    },
];

/// Weierstrass pair filtration of `ΩM_4(4,2)^even`.
const EVEN_4_2_PAIRS: &[([i32; 2], [i32; 2])] = &[([1, 1], [2, 1]), ([3, 1], [3, 2]), ([3, 2], [4, 2])];

/// Maps table sections (descending zero order) to positions in the caller's
/// zero list.
fn section_map(zeros: &[u32], canonical: &[u32]) -> Vec<usize> {
    let mut used = vec![false; zeros.len()];
    canonical
        .iter()
        .map(|m| {
            let pos = (0..zeros.len())
                .find(|&p| !used[p] && zeros[p] == *m)
                .expect("same multiset");
            used[pos] = true;
            pos + 1
        })
        .collect()
}

/// Exponents for the low-genus non-varying strata, the one-point strata and
/// the hyperelliptic components.
pub fn low_genus_exponents(s: &Stratum) -> Result<Filtration> {
    low_genus_exponents_with(s, false)
}

pub fn low_genus_exponents_with(s: &Stratum, assume_generic: bool) -> Result<Filtration> {
    let canonical = s.sorted_zeros();
    let map = section_map(&s.zeros, &canonical);
    let not_covered = || Error::NotCovered(format!("{}{}", render_zeros(&s.zeros), tag(s)));

    if s.is_hyperelliptic_component() || (s.genus == 2 && s.component == Component::Unspecified) {
        let hyp = Stratum {
            component: Component::Hyperelliptic,
            ..s.clone()
        };
        let sig = hyperelliptic_signature(&hyp)?;
        let f = hyperelliptic_exponents(&sig)?;
        // lifted zeros all have the same order here, so sections line up
        return Filtration::from_ordered(s.genus, s.zeros.clone(), f.steps, f.splits);
    }
    if s.hyperelliptic_locus {
        return Err(not_covered());
    }
    if s.zeros.len() == 1 && s.component.is_spin() {
        return one_section_exponents_with(s.genus, s.component, assume_generic);
    }
    if s.genus == 4 && canonical == [4, 2] && s.component == Component::Even {
        let steps = std::iter::once(QuotientStep::higgs())
            .chain(EVEN_4_2_PAIRS.iter().map(|(lo, hi)| {
                let permute = |t: &[i32; 2]| {
                    let mut v = vec![0; 2];
                    for (c, &p) in map.iter().enumerate() {
                        v[p - 1] = t[c];
                    }
                    TupleIndex(v)
                };
                let label = StepLabel::Pair {
                    lower: permute(lo),
                    upper: permute(hi),
                };
                let m = s.zeros[label.section().unwrap() - 1];
                QuotientStep::on_section(label, m)
            }))
            .collect();
        return Filtration::from_unsorted(s.genus, s.zeros.clone(), steps, false);
    }
    let entry = SPLITTINGS
        .iter()
        .find(|e| e.genus == s.genus && e.zeros == canonical.as_slice() && e.components.contains(&s.component))
        .ok_or_else(not_covered)?;
    let steps = std::iter::once(QuotientStep::higgs())
        .chain(entry.summands.iter().map(|&(section, multiplicity)| {
            let section = map[section - 1];
            QuotientStep::on_section(StepLabel::Section { section, multiplicity }, s.zeros[section - 1])
        }))
        .collect();
    Filtration::from_unsorted(s.genus, s.zeros.clone(), steps, true)
}

fn tag(s: &Stratum) -> String {
    match s.component {
        Component::Unspecified => String::new(),
        c => format!(" {c}"),
    }
}
