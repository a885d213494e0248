//! Sums of Lyapunov exponents, their upper bounds and the denominator test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::rational::Rational;
use crate::semigroup::{weight, GapSet};
use crate::stratum::{kappa_mu, QuadraticSignature, Stratum};

/// Sum of the Weierstrass exponents, which equals `L(C)`.
pub fn sum_exponents(f: &Filtration) -> Rational {
    f.sum()
}

/// `L(C) = (1/4) Σ_{d_j odd} 1/(d_j + 2)`, poles included.
pub fn ekz_sum(sig: &QuadraticSignature) -> Rational {
    let total: Rational = sig
        .orders()
        .iter()
        .filter(|&&d| d % 2 != 0)
        .map(|&d| Rational::new(1, i64::from(d) + 2))
        .sum();
    total / 4
}

/// `w(H)/(2g-1) + g(g+1)/(2(2g-1))`.
pub fn onesum_from_weight(genus: u32, gs: &GapSet) -> Rational {
    let g = i64::from(genus);
    Rational::new(i64::from(weight(gs)), 2 * g - 1) + Rational::new(g * (g + 1), 2 * (2 * g - 1))
}

/// The maximum `g²/(2g-1)` of [`onesum_from_weight`].
pub fn onesum_max(genus: u32) -> Rational {
    let g = i64::from(genus);
    Rational::new(g * g, 2 * g - 1)
}

fn require_genus(s: &Stratum) -> Result<()> {
    if s.genus < 2 {
        Err(Error::GenusTooSmall(s.genus))
    } else {
        Ok(())
    }
}

/// `3g/4 − (1/8)(−2 + Σ_{m even} m/(m+1) + #{m odd})`.
pub fn upper_bound_closed(s: &Stratum) -> Result<Rational> {
    require_genus(s)?;
    let mut inner = Rational::from_int(-2);
    for &m in &s.zeros {
        let m = i64::from(m);
        inner += if m % 2 == 0 {
            Rational::new(m, m + 1)
        } else {
            Rational::one()
        };
    }
    Ok(Rational::new(3 * i64::from(s.genus), 4) - inner / 8)
}

pub const COMPOSITION_GUARD: u128 = 10_000_000;

/// Minimizing composition and the bound it certifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceBound {
    pub bound: Rational,
    pub minimizer: Vec<u32>,
    pub compositions: u64,
}

/// `g − min Σ n_i(n_i+1)/(2(m_i+1))` over `Σ n_i = g−1`, `0 ≤ n_i ≤ m_i`, by
/// exhaustive enumeration. Ties keep the lexicographically largest minimizer.
pub fn upper_bound_bruteforce(s: &Stratum) -> Result<Rational> {
    upper_bound_bruteforce_detail(s).map(|b| b.bound)
}

pub fn upper_bound_bruteforce_detail(s: &Stratum) -> Result<BruteForceBound> {
    require_genus(s)?;
    let boxes: u128 = s.zeros.iter().map(|&m| u128::from(m) + 1).product();
    if boxes > COMPOSITION_GUARD {
        return Err(Error::TooLarge(boxes));
    }
    let cost = |n: u32, m: u32| Rational::new(i64::from(n) * i64::from(n + 1), 2 * (i64::from(m) + 1));
    let costs: Vec<Vec<Rational>> = s.zeros.iter().map(|&m| (0..=m).map(|n| cost(n, m)).collect()).collect();
    // suffix capacity lets the search skip compositions that cannot sum up
    let mut capacity = vec![0u32; s.zeros.len() + 1];
    for i in (0..s.zeros.len()).rev() {
        capacity[i] = capacity[i + 1] + s.zeros[i];
    }

    struct Search<'a> {
        zeros: &'a [u32],
        costs: &'a [Vec<Rational>],
        capacity: &'a [u32],
        current: Vec<u32>,
        best: Option<(Rational, Vec<u32>)>,
        visited: u64,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, remaining: u32, acc: Rational) {
            if i == self.zeros.len() {
                if remaining == 0 {
                    self.visited += 1;
                    if self.best.as_ref().is_none_or(|(b, _)| acc < *b) {
                        self.best = Some((acc, self.current.clone()));
                    }
                }
                return;
            }
            let lo = remaining.saturating_sub(self.capacity[i + 1]);
            let hi = remaining.min(self.zeros[i]);
            for n in (lo..=hi).rev() {
                self.current.push(n);
                self.run(i + 1, remaining - n, acc + self.costs[i][n as usize]);
                self.current.pop();
            }
        }
    }

    let mut search = Search {
        zeros: &s.zeros,
        costs: &costs,
        capacity: &capacity,
        current: Vec::new(),
        best: None,
        visited: 0,
    };
    search.run(0, s.genus - 1, Rational::zero());
    let (min, minimizer) = search.best.expect("Σ m_i = 2g-2 ≥ g-1 admits a composition");
    Ok(BruteForceBound {
        bound: Rational::from_int(i64::from(s.genus)) - min,
        minimizer,
        compositions: search.visited,
    })
}

/// Slope-inequality bound `(g/(4(g−1))) Σ m_i(m_i+2)/(m_i+1)`.
pub fn cmx_bound(s: &Stratum) -> Result<Rational> {
    require_genus(s)?;
    let g = i64::from(s.genus);
    let total: Rational = s
        .zeros
        .iter()
        .map(|&m| {
            let m = i64::from(m);
            Rational::new(m * (m + 2), m + 1)
        })
        .sum();
    Ok(total * Rational::new(g, 4 * (g - 1)))
}

/// `(3g/(g−1)) κ_μ`, the same bound through `κ_μ`.
pub fn cmx_bound_via_kappa(s: &Stratum) -> Result<Rational> {
    require_genus(s)?;
    let g = i64::from(s.genus);
    Ok(kappa_mu(s) * Rational::new(3 * g, g - 1))
}

/// Whether the denominator of `sum` divides `∏(m_i + 1)`.
pub fn denominator_divides(sum: Rational, s: &Stratum) -> bool {
    s.zero_product().is_multiple_of(sum.denom() as u64)
}

/// Subject of a [`SumReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Stratum(Stratum),
    Signature { signature: String, stratum: Stratum },
}

impl Subject {
    pub fn stratum(&self) -> &Stratum {
        match self {
            Subject::Stratum(s) | Subject::Signature { stratum: s, .. } => s,
        }
    }
}

/// Sum of exponents with the bounds and checks that apply to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumReport {
    pub subject: Subject,
    pub sum: Rational,
    pub bound_closed: Option<Rational>,
    pub bound_cmx: Option<Rational>,
    pub kappa: Rational,
    pub denominator_ok: bool,
}

impl SumReport {
    pub fn new(subject: Subject, f: &Filtration) -> Self {
        let s = subject.stratum();
        let sum = sum_exponents(f);
        SumReport {
            sum,
            bound_closed: upper_bound_closed(s).ok(),
            bound_cmx: cmx_bound(s).ok(),
            kappa: kappa_mu(s),
            denominator_ok: denominator_divides(sum, s),
            subject,
        }
    }

    /// `sum ≤ bound_closed` and `sum ≤ bound_cmx` wherever defined.
    pub fn within_bounds(&self) -> bool {
        self.bound_closed.is_none_or(|b| self.sum <= b) && self.bound_cmx.is_none_or(|b| self.sum <= b)
    }

    /// `L − κ_μ`; the area Siegel–Veech constant is this times `3/π²`.
    pub fn c_area_scaled(&self) -> Rational {
        self.sum - self.kappa
    }
}
