//! Strata of abelian differentials and quadratic signatures of hyperelliptic
//! loci.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Connected-component tag of a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Hyperelliptic,
    Odd,
    Even,
    NonHyperelliptic,
    Unspecified,
}

impl Component {
    /// Short form used by the tables; the unspecified tag renders empty.
    pub fn table_label(self) -> &'static str {
        match self {
            Component::Unspecified => "",
            other => other.short(),
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Component::Hyperelliptic => "hyp",
            Component::Odd => "odd",
            Component::Even => "even",
            Component::NonHyperelliptic => "non-hyp",
            Component::Unspecified => "unspecified",
        }
    }

    pub fn is_spin(self) -> bool {
        matches!(self, Component::Odd | Component::Even)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hyp" | "hyperelliptic" => Ok(Component::Hyperelliptic),
            "odd" => Ok(Component::Odd),
            "even" => Ok(Component::Even),
            "non-hyp" | "nonhyp" | "non-hyperelliptic" => Ok(Component::NonHyperelliptic),
            "" | "unspecified" | "none" => Ok(Component::Unspecified),
            other => Err(Error::Parse(format!("unknown component {other:?}"))),
        }
    }
}

/// A validated stratum `ΩM_g(m_1, ..., m_k)` with a component tag.
///
/// `hyperelliptic_locus` marks the hyperelliptic locus of a general
/// partition (as opposed to a hyperelliptic connected component); it is only
/// ever set together with [`Component::Hyperelliptic`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "g")]
    pub genus: u32,
    pub zeros: Vec<u32>,
    pub component: Component,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hyperelliptic_locus: bool,
}

fn is_hyperelliptic_component_partition(genus: u32, zeros: &[u32]) -> bool {
    match zeros {
        [] => genus == 1,
        [m] => *m + 2 == 2 * genus,
        [a, b] => a == b && *a + 1 == genus,
        _ => false,
    }
}

fn check_partition(genus: u32, zeros: &[u32]) -> Result<()> {
    if genus == 0 {
        return Err(Error::PartitionMismatch("genus must be at least 1".into()));
    }
    if zeros.contains(&0) {
        return Err(Error::PartitionMismatch("zero orders must be positive".into()));
    }
    let total: u64 = zeros.iter().map(|&m| u64::from(m)).sum();
    let expected = 2 * u64::from(genus) - 2;
    if total != expected {
        return Err(Error::PartitionMismatch(format!(
            "zero orders sum to {total}, expected 2g-2 = {expected}"
        )));
    }
    Ok(())
}

/// Validates a stratum descriptor. Nothing is normalized: the zero list keeps
/// the caller's order.
pub fn validate_stratum(genus: u32, zeros: &[u32], component: Component) -> Result<Stratum> {
    check_partition(genus, zeros)?;
    match component {
        Component::Odd | Component::Even => {
            if let Some(m) = zeros.iter().find(|&&m| m % 2 == 1) {
                return Err(Error::ComponentMismatch(format!(
                    "spin tag {component} requires even zero orders, found {m}"
                )));
            }
        }
        Component::Hyperelliptic => {
            if !is_hyperelliptic_component_partition(genus, zeros) {
                return Err(Error::ComponentMismatch(format!(
                    "{} is not a hyperelliptic component partition; use the hyperelliptic locus flag",
                    render_zeros(zeros)
                )));
            }
        }
        Component::NonHyperelliptic | Component::Unspecified => {}
    }
    Ok(Stratum {
        genus,
        zeros: zeros.to_vec(),
        component,
        hyperelliptic_locus: false,
    })
}

/// Validates the hyperelliptic locus of a general partition. Zeros of odd
/// order come in conjugate pairs on such surfaces, so each odd order must
/// occur an even number of times.
pub fn validate_hyperelliptic_locus(genus: u32, zeros: &[u32]) -> Result<Stratum> {
    check_partition(genus, zeros)?;
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &m in zeros {
        *counts.entry(m).or_default() += 1;
    }
    if let Some((m, _)) = counts.iter().find(|(&m, &c)| m % 2 == 1 && c % 2 == 1) {
        return Err(Error::ComponentMismatch(format!(
            "odd zero order {m} occurs an odd number of times; no hyperelliptic locus"
        )));
    }
    Ok(Stratum {
        genus,
        zeros: zeros.to_vec(),
        component: Component::Hyperelliptic,
        hyperelliptic_locus: true,
    })
}

pub(crate) fn render_zeros(zeros: &[u32]) -> String {
    let inner: Vec<String> = zeros.iter().map(|m| m.to_string()).collect();
    format!("({})", inner.join(","))
}

impl Stratum {
    pub fn is_hyperelliptic_component(&self) -> bool {
        self.component == Component::Hyperelliptic && !self.hyperelliptic_locus
    }

    /// `∏(m_i + 1)`, the bound on denominators of exponent sums.
    pub fn zero_product(&self) -> u64 {
        self.zeros.iter().map(|&m| u64::from(m) + 1).product()
    }

    /// Zero orders sorted descending.
    pub fn sorted_zeros(&self) -> Vec<u32> {
        let mut z = self.zeros.clone();
        z.sort_unstable_by(|a, b| b.cmp(a));
        z
    }
}

impl fmt::Display for Stratum {
    /// `g=4,zeros=3+3,component=non-hyp`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zeros: Vec<String> = self.zeros.iter().map(|m| m.to_string()).collect();
        let component = if self.hyperelliptic_locus {
            "hyp-locus"
        } else {
            self.component.short()
        };
        write!(f, "g={},zeros={},component={}", self.genus, zeros.join("+"), component)
    }
}

/// Splits `key=value` assignments separated by commas, keeping commas that
/// belong to a value (`sig=6,-1x10`).
pub(crate) fn split_assignments(s: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match piece.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_ascii_lowercase(), v.trim().to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(piece);
                }
                None => return Err(Error::Parse(format!("expected key=value, found {piece:?}"))),
            },
        }
    }
    Ok(out)
}

pub(crate) fn parse_zero_list(s: &str) -> Result<Vec<u32>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(['+', ' '])
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad zero order {p:?}")))
        })
        .collect()
}

impl FromStr for Stratum {
    type Err = Error;

    /// Grammar: `g=4,zeros=3+3,component=non-hyp`. `component` may be omitted
    /// (unspecified) or `hyp-locus` for the hyperelliptic locus of a general
    /// partition; `zeros` may be omitted for genus 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut genus = None;
        let mut zeros = Vec::new();
        let mut component = Component::Unspecified;
        let mut locus = false;
        for (k, v) in split_assignments(s)? {
            match k.as_str() {
                "g" | "genus" => genus = Some(v.parse::<u32>().map_err(|_| Error::Parse(format!("bad genus {v:?}")))?),
                "zeros" => zeros = parse_zero_list(&v)?,
                "component" if v.eq_ignore_ascii_case("hyp-locus") => locus = true,
                "component" => component = v.parse()?,
                other => return Err(Error::Parse(format!("unknown stratum key {other:?}"))),
            }
        }
        let genus = genus.ok_or_else(|| Error::Parse("missing g=".into()))?;
        if locus {
            validate_hyperelliptic_locus(genus, &zeros)
        } else {
            validate_stratum(genus, &zeros, component)
        }
    }
}

/// `κ_μ = (1/12) Σ m_i (m_i + 2) / (m_i + 1)`.
pub fn kappa_mu(s: &Stratum) -> Rational {
    let total: Rational = s
        .zeros
        .iter()
        .map(|&m| {
            let m = i64::from(m);
            Rational::new(m * (m + 2), m + 1)
        })
        .sum();
    total / 12
}

/// Orders of singularities of a quadratic differential on the sphere.
/// Stored sorted descending; every order is `-1` or positive and the orders
/// sum to `-4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticSignature {
    orders: Vec<i32>,
}

/// How a singularity of the quadratic differential lifts to the double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftedZero {
    /// Odd positive order `d`: one Weierstrass zero of order `d + 1`.
    Weierstrass { singularity: usize, order: u32 },
    /// Even order `d`: two conjugate zeros of order `d / 2`.
    ConjugatePair { singularity: usize, order: u32 },
}

impl QuadraticSignature {
    pub fn new(orders: &[i32]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        if let Some(d) = orders.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidSignature(format!("order {d} is not a singularity")));
        }
        if let Some(d) = orders.iter().find(|&&d| d < -1) {
            return Err(Error::InvalidSignature(format!(
                "order {d} is below -1; only simple poles are allowed"
            )));
        }
        let total: i64 = orders.iter().map(|&d| i64::from(d)).sum();
        if total != -4 {
            return Err(Error::InvalidSignature(format!("orders sum to {total}, expected -4")));
        }
        let mut orders = orders.to_vec();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(QuadraticSignature { orders })
    }

    pub fn orders(&self) -> &[i32] {
        &self.orders
    }

    /// Non-pole singularities, in signature order.
    pub fn singularities(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.orders.iter().copied().enumerate().filter(|&(_, d)| d > 0)
    }

    pub fn pole_count(&self) -> usize {
        self.orders.iter().filter(|&&d| d == -1).count()
    }

    /// The zeros of the pulled-back abelian differential, in signature order.
    /// Conjugate pairs contribute two consecutive entries.
    pub fn lifted_zeros(&self) -> Vec<LiftedZero> {
        let mut out = Vec::new();
        for (j, d) in self.singularities() {
            let d = d as u32;
            if d.is_multiple_of(2) {
                let z = LiftedZero::ConjugatePair {
                    singularity: j,
                    order: d / 2,
                };
                out.push(z);
                out.push(z);
            } else {
                out.push(LiftedZero::Weierstrass {
                    singularity: j,
                    order: d + 1,
                });
            }
        }
        out
    }
}

impl LiftedZero {
    pub fn order(&self) -> u32 {
        match *self {
            LiftedZero::Weierstrass { order, .. } | LiftedZero::ConjugatePair { order, .. } => order,
        }
    }
}

impl fmt::Display for QuadraticSignature {
    /// Run-length form, e.g. `6,-1x10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let d = self.orders[i];
            let run = self.orders[i..].iter().take_while(|&&x| x == d).count();
            if run == 1 {
                terms.push(d.to_string());
            } else {
                terms.push(format!("{d}x{run}"));
            }
            i += run;
        }
        f.write_str(&terms.join(","))
    }
}

impl FromStr for QuadraticSignature {
    type Err = Error;

    /// Comma-separated terms `d` or `dxN`; an optional `sig=` prefix is
    /// accepted.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("sig=").unwrap_or(s);
        let mut orders = Vec::new();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::Parse(format!("bad signature term {term:?}"));
            let (d, n) = match term.split_once(['x', 'X', '^']) {
                Some((d, n)) => (d, n.parse::<usize>().map_err(|_| bad())?),
                None => (term, 1),
            };
            let d = d.trim().parse::<i32>().map_err(|_| bad())?;
            if n > 10_000 {
                return Err(bad());
            }
            orders.extend(std::iter::repeat_n(d, n));
        }
        QuadraticSignature::new(&orders)
    }
}

/// Genus and zero orders of the double cover. Odd `d > 0` gives one zero of
/// order `d + 1`, even `d` gives two zeros of order `d / 2`, poles give none.
pub fn derived_zeros(sig: &QuadraticSignature) -> (u32, Vec<u32>) {
    let zeros: Vec<u32> = sig.lifted_zeros().iter().map(LiftedZero::order).collect();
    let total: u32 = zeros.iter().sum();
    // every lifted order is even or comes twice, so the total is even
    (1 + total / 2, zeros)
}

/// The hyperelliptic locus stratum covering `sig`.
pub fn derived_stratum(sig: &QuadraticSignature) -> Stratum {
    let (genus, zeros) = derived_zeros(sig);
    validate_hyperelliptic_locus(genus, &zeros).expect("lifted zeros of a valid signature form a hyperelliptic locus")
}

/// Signature of the quotient quadratic differential for the hyperelliptic
/// connected components `(2g-2)^hyp` and `(g-1, g-1)^hyp`.
pub fn hyperelliptic_signature(s: &Stratum) -> Result<QuadraticSignature> {
    if !s.is_hyperelliptic_component() {
        return Err(Error::NotHyperellipticComponent(s.to_string()));
    }
    let g = s.genus as i32;
    let mut orders = match s.zeros.as_slice() {
        [] => Vec::new(),
        [_] => vec![2 * g - 3],
        [_, _] => vec![2 * g - 2],
        _ => return Err(Error::NotHyperellipticComponent(s.to_string())),
    };
    let poles = orders.iter().sum::<i32>() + 4;
    orders.extend(std::iter::repeat_n(-1, poles as usize));
    QuadraticSignature::new(&orders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(s: &str) -> QuadraticSignature {
        s.parse().unwrap()
    }

    #[test]
    fn validates_strata() {
        assert!(validate_stratum(4, &[3, 3], Component::NonHyperelliptic).is_ok());
        assert!(validate_stratum(1, &[], Component::Unspecified).is_ok());
        assert!(validate_stratum(3, &[4], Component::Even).is_ok());
        assert!(matches!(
            validate_stratum(3, &[3, 1], Component::Odd),
            Err(Error::ComponentMismatch(_))
        ));
        assert!(matches!(
            validate_stratum(3, &[3, 2], Component::Unspecified),
            Err(Error::PartitionMismatch(_))
        ));
        assert!(matches!(
            validate_stratum(3, &[2, 1, 1], Component::Hyperelliptic),
            Err(Error::ComponentMismatch(_))
        ));
        assert!(validate_stratum(4, &[3, 3], Component::Hyperelliptic).is_ok());
        assert!(validate_stratum(4, &[6], Component::Hyperelliptic).is_ok());
    }

    #[test]
    fn no_silent_normalization() {
        let s = validate_stratum(4, &[1, 2, 3], Component::Unspecified).unwrap();
        assert_eq!(s.zeros, vec![1, 2, 3]);
        assert_eq!(s.sorted_zeros(), vec![3, 2, 1]);
    }

    #[test]
    fn hyperelliptic_locus_flag() {
        let s = validate_hyperelliptic_locus(3, &[1, 1, 1, 1]).unwrap();
        assert!(s.hyperelliptic_locus);
        assert!(!s.is_hyperelliptic_component());
        assert!(validate_hyperelliptic_locus(4, &[3, 2, 1]).is_err());
    }

    #[test]
    fn parses_stratum_grammar() {
        let s: Stratum = "g=4,zeros=3+3,component=non-hyp".parse().unwrap();
        assert_eq!(s.genus, 4);
        assert_eq!(s.zeros, vec![3, 3]);
        assert_eq!(s.component, Component::NonHyperelliptic);
        assert_eq!(s.to_string(), "g=4,zeros=3+3,component=non-hyp");
        let t: Stratum = "g=1".parse().unwrap();
        assert!(t.zeros.is_empty());
        assert!("g=4,zeros=3+3,colour=red".parse::<Stratum>().is_err());
        let l: Stratum = "g=3,zeros=1+1+1+1,component=hyp-locus".parse().unwrap();
        assert!(l.hyperelliptic_locus);
    }

    #[test]
    fn signature_grammar() {
        let s = sig("6,-1x10");
        assert_eq!(s.orders().len(), 11);
        assert_eq!(s.to_string(), "6,-1x10");
        assert_eq!(sig("-1x8,2,2").to_string(), "2x2,-1x8");
        assert!(matches!(
            "0,-1x4".parse::<QuadraticSignature>(),
            Err(Error::InvalidSignature(_))
        ));
        assert!(matches!(
            "-2,-1x2".parse::<QuadraticSignature>(),
            Err(Error::InvalidSignature(_))
        ));
        assert!(matches!(
            "3,-1x6".parse::<QuadraticSignature>(),
            Err(Error::InvalidSignature(_))
        ));
        assert!("3,-1xq".parse::<QuadraticSignature>().is_err());
    }

    #[test]
    fn derived_zeros_examples() {
        assert_eq!(derived_zeros(&sig("3,-1x7")), (3, vec![4]));
        assert_eq!(derived_zeros(&sig("6,-1x10")), (4, vec![3, 3]));
        assert_eq!(derived_zeros(&sig("2,2,-1x8")), (3, vec![1, 1, 1, 1]));
        assert_eq!(derived_zeros(&sig("-1x4")), (1, vec![]));
    }

    #[test]
    fn hyperelliptic_signature_examples() {
        let s = validate_stratum(3, &[4], Component::Hyperelliptic).unwrap();
        assert_eq!(hyperelliptic_signature(&s).unwrap(), sig("3,-1x7"));
        let s = validate_stratum(4, &[3, 3], Component::Hyperelliptic).unwrap();
        assert_eq!(hyperelliptic_signature(&s).unwrap(), sig("6,-1x10"));
        let s = validate_stratum(2, &[2], Component::Hyperelliptic).unwrap();
        assert_eq!(hyperelliptic_signature(&s).unwrap(), sig("1,-1x5"));
        let s = validate_stratum(4, &[3, 3], Component::NonHyperelliptic).unwrap();
        assert!(matches!(
            hyperelliptic_signature(&s),
            Err(Error::NotHyperellipticComponent(_))
        ));
        let l = validate_hyperelliptic_locus(3, &[1, 1, 1, 1]).unwrap();
        assert!(hyperelliptic_signature(&l).is_err());
    }

    #[test]
    fn kappa_examples() {
        let k = |g, z: &[u32]| kappa_mu(&validate_stratum(g, z, Component::Unspecified).unwrap());
        assert_eq!(k(3, &[4]), Rational::new(2, 5));
        assert_eq!(k(1, &[]), Rational::zero());
        assert_eq!(k(3, &[1, 1, 1, 1]), Rational::new(1, 2));
    }

    proptest! {
        #[test]
        fn hyperelliptic_signature_inverts_derived_zeros(g in 1u32..30, paired in any::<bool>()) {
            let zeros = if g == 1 { vec![] } else if paired { vec![g - 1, g - 1] } else { vec![2 * g - 2] };
            let s = validate_stratum(g, &zeros, Component::Hyperelliptic).unwrap();
            let q = hyperelliptic_signature(&s).unwrap();
            prop_assert_eq!(derived_zeros(&q), (g, zeros));
        }

        #[test]
        fn signatures_lift_to_integral_genus(pos in proptest::collection::vec(1i32..12, 0..6)) {
            let mut orders = pos.clone();
            let poles = pos.iter().sum::<i32>() + 4;
            orders.extend(std::iter::repeat_n(-1, poles as usize));
            let q = QuadraticSignature::new(&orders).unwrap();
            let (g, zeros) = derived_zeros(&q);
            prop_assert_eq!(zeros.iter().sum::<u32>() + 2, 2 * g);
            prop_assert!(g >= 1);
            let s = derived_stratum(&q);
            prop_assert_eq!(s.genus, g);
        }

        #[test]
        fn kappa_positive_and_denominator_bounded(z in proptest::collection::vec(1u32..9, 1..5)) {
            let total: u32 = z.iter().sum();
            if total.is_multiple_of(2) {
                let s = validate_stratum(total / 2 + 1, &z, Component::Unspecified).unwrap();
                let k = kappa_mu(&s);
                prop_assert!(k.is_positive());
                prop_assert_eq!((12 * s.zero_product()) % k.denom() as u64, 0);
            }
        }
    }
}
