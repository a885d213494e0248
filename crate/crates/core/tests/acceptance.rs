//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use weierstrass::{
    cmx_bound, denominator_divides, derived_stratum, ekz_sum, gaps_one_point, genus_table, hn_all_exponent_multisets,
    hn_construct, hyperelliptic_exponents, members, one_section_exponents, rank_table_hyperelliptic,
    rank_table_one_point, sum_exponents, upper_bound_bruteforce, upper_bound_closed, validate_stratum, weight,
    Component, GapSet, QuadraticSignature, Rational, RowStatus, Stratum,
};

/// Exact comparisons throughout; the only tolerances are wall-clock budgets.
const EKZ_BUDGET: Duration = Duration::from_secs(10);
const BOUND_BUDGET: Duration = Duration::from_secs(30);
const MAX_GENUS: u32 = 8;
const MAX_NON_POLES: usize = 6;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict {
            ok,
            detail: detail.into(),
        }
    }
}

/// Printed table entries: zeros, component, `w_2..w_g`, sum.
type Expected = (&'static [u32], Component, &'static [(i64, i64)], (i64, i64));

const TABLE_3: &[Expected] = &[
    (&[4], Component::Hyperelliptic, &[(3, 5), (1, 5)], (9, 5)),
    (&[4], Component::Odd, &[(2, 5), (1, 5)], (8, 5)),
    (&[3, 1], Component::Unspecified, &[(2, 4), (1, 4)], (7, 4)),
    (&[2, 2], Component::Hyperelliptic, &[(2, 3), (1, 3)], (2, 1)),
    (&[2, 2], Component::Odd, &[(1, 3), (1, 3)], (5, 3)),
    (&[2, 1, 1], Component::Unspecified, &[(1, 2), (1, 3)], (11, 6)),
];

const TABLE_4: &[Expected] = &[
    (&[6], Component::Hyperelliptic, &[(5, 7), (3, 7), (1, 7)], (16, 7)),
    (&[6], Component::Even, &[(4, 7), (2, 7), (1, 7)], (14, 7)),
    (&[6], Component::Odd, &[(3, 7), (2, 7), (1, 7)], (13, 7)),
    (&[5, 1], Component::Unspecified, &[(1, 2), (2, 6), (1, 6)], (2, 1)),
    (&[3, 3], Component::Hyperelliptic, &[(3, 4), (2, 4), (1, 4)], (5, 2)),
    (&[3, 3], Component::NonHyperelliptic, &[(2, 4), (1, 4), (1, 4)], (2, 1)),
    (&[4, 2], Component::Even, &[(3, 5), (1, 3), (1, 5)], (32, 15)),
    (&[4, 2], Component::Odd, &[(2, 5), (1, 3), (1, 5)], (29, 15)),
    (&[2, 2, 2], Component::Odd, &[(1, 3), (1, 3), (1, 3)], (2, 1)),
    (&[3, 2, 1], Component::Unspecified, &[(1, 2), (1, 3), (1, 4)], (25, 12)),
];

const TABLE_5: &[Expected] = &[
    (
        &[8],
        Component::Hyperelliptic,
        &[(7, 9), (5, 9), (3, 9), (1, 9)],
        (25, 9),
    ),
    (&[8], Component::Even, &[(5, 9), (3, 9), (2, 9), (1, 9)], (20, 9)),
    (&[8], Component::Odd, &[(4, 9), (3, 9), (2, 9), (1, 9)], (19, 9)),
    (
        &[5, 3],
        Component::Unspecified,
        &[(1, 2), (1, 3), (1, 4), (1, 6)],
        (9, 4),
    ),
    (&[6, 2], Component::Odd, &[(3, 7), (1, 3), (2, 7), (1, 7)], (46, 21)),
    (
        &[4, 4],
        Component::Hyperelliptic,
        &[(4, 5), (3, 5), (2, 5), (1, 5)],
        (3, 1),
    ),
];

/// Every signature with derived genus in `2..=MAX_GENUS` and at most
/// `MAX_NON_POLES` non-pole singularities. A non-pole order `d` adds
/// `d + (d mod 2)` to `2g - 2`.
fn signatures() -> Vec<QuadraticSignature> {
    fn go(max: i32, left: usize, budget: i32, acc: &mut Vec<i32>, out: &mut Vec<QuadraticSignature>) {
        let used: i32 = acc.iter().map(|d| d + d % 2).sum();
        if used >= 2 {
            let mut orders = acc.clone();
            orders.extend(std::iter::repeat_n(-1, (acc.iter().sum::<i32>() + 4) as usize));
            out.push(QuadraticSignature::new(&orders).expect("enumerated signature is valid"));
        }
        if left == 0 {
            return;
        }
        for d in (1..=max).rev() {
            if d + d % 2 <= budget {
                acc.push(d);
                go(d, left - 1, budget - d - d % 2, acc, out);
                acc.pop();
            }
        }
    }
    let budget = 2 * MAX_GENUS as i32 - 2;
    let mut out = Vec::new();
    go(budget, MAX_NON_POLES, budget, &mut Vec::new(), &mut out);
    out
}

/// Independent EKZ value: `(1/4) Σ_{d odd} 1/(d+2)` over all singularities.
fn ekz_oracle(sig: &QuadraticSignature) -> Rational {
    sig.orders()
        .iter()
        .filter(|d| d.rem_euclid(2) == 1)
        .map(|&d| r(1, 4 * (i64::from(d) + 2)))
        .fold(Rational::zero(), |a, b| a + b)
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// One-point strata with a proven gap set: `(g, component)` for `g <= 5`.
fn one_point_cases() -> Vec<(u32, Component)> {
    let mut out = Vec::new();
    for g in 2..=5 {
        for c in [Component::Hyperelliptic, Component::Odd, Component::Even] {
            if gaps_one_point(g, c).is_ok() {
                out.push((g, c));
            }
        }
    }
    out
}

fn criterion_1() -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (g, expected, printed_rows) in [(3, TABLE_3, 7), (4, TABLE_4, 10), (5, TABLE_5, 6)] {
        let rows = match genus_table(g) {
            Ok(rows) => rows,
            Err(e) => return Verdict::new(false, format!("genus {g}: {e}")),
        };
        if rows.len() != printed_rows {
            failures.push(format!("genus {g}: {} rows", rows.len()));
        }
        for (i, (zeros, component, ws, (sn, sd))) in expected.iter().enumerate() {
            let Some(row) = rows.get(i) else { break };
            let want: Vec<Rational> = ws.iter().map(|&(n, d)| r(n, d)).collect();
            let ok = row.status == RowStatus::Computed
                && row.stratum.zeros == *zeros
                && row.stratum.component == *component
                && row.exponents == want
                && row.sum == Some(r(*sn, *sd))
                && Rational::one() + want.iter().copied().sum::<Rational>() == r(*sn, *sd);
            checked += 1;
            if !ok {
                failures.push(format!("genus {g} row {}", i + 1));
            }
        }
    }
    let varying = genus_table(3).ok().and_then(|t| t.get(6).map(|r| r.status)) == Some(RowStatus::Varying);
    if !varying {
        failures.push("genus 3 (1,1,1,1) not marked varying".into());
    }
    Verdict::new(
        failures.is_empty(),
        format!("{checked} computed rows exact, (1,1,1,1) varying; failures: {failures:?}"),
    )
}

fn criterion_2(sigs: &[QuadraticSignature]) -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for sig in sigs {
        let Ok(f) = hyperelliptic_exponents(sig) else {
            bad.push(sig.to_string());
            continue;
        };
        let sum = sum_exponents(&f);
        if sum != ekz_sum(sig) || sum != ekz_oracle(sig) {
            bad.push(sig.to_string());
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(
        bad.is_empty() && elapsed < EKZ_BUDGET,
        format!(
            "{} signatures, {:.2?} (budget {:?}); mismatches: {bad:?}",
            sigs.len(),
            elapsed,
            EKZ_BUDGET
        ),
    )
}

fn criterion_3(sigs: &[QuadraticSignature]) -> Verdict {
    let mut bad = Vec::new();
    let cases = one_point_cases();
    for &(g, c) in &cases {
        let gs = gaps_one_point(g, c).unwrap();
        let direct = one_section_exponents(g, c).unwrap();
        match hn_construct(&rank_table_one_point(&gs)) {
            Ok(hn) if hn.exponents == direct.exponents => {}
            _ => bad.push(format!("g={g} {c}")),
        }
    }
    for sig in sigs {
        let direct = hyperelliptic_exponents(sig).unwrap();
        match hn_construct(&rank_table_hyperelliptic(sig)) {
            Ok(hn) if hn.exponents == direct.exponents => {}
            _ => bad.push(sig.to_string()),
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!(
            "{} one-point strata, {} signatures; mismatches: {bad:?}",
            cases.len(),
            sigs.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut count = 0;
    let mut bad = Vec::new();
    for g in 2..=MAX_GENUS {
        for zeros in partitions(2 * g - 2, 2 * g - 2) {
            let s = validate_stratum(g, &zeros, Component::Unspecified).unwrap();
            count += 1;
            match (upper_bound_closed(&s), upper_bound_bruteforce(&s)) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => bad.push(s.to_string()),
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(
        bad.is_empty() && elapsed < BOUND_BUDGET,
        format!(
            "{count} partitions, {:.2?} (budget {:?}); mismatches: {bad:?}",
            elapsed, BOUND_BUDGET
        ),
    )
}

/// `denominator(sum) | ∏(m_i + 1)`, recomputed here from the zero orders.
fn divides_oracle(sum: Rational, zeros: &[u32]) -> bool {
    let product: i64 = zeros.iter().map(|&m| i64::from(m) + 1).product();
    product % sum.denom() == 0
}

fn criterion_5(sigs: &[QuadraticSignature]) -> Verdict {
    let mut sums: Vec<(Stratum, Rational)> = Vec::new();
    for g in 3..=5 {
        for row in genus_table(g).unwrap() {
            if let Some(sum) = row.sum {
                sums.push((row.stratum, sum));
            }
        }
    }
    for (g, c) in one_point_cases() {
        let f = one_section_exponents(g, c).unwrap();
        sums.push((validate_stratum(g, &[2 * g - 2], c).unwrap(), f.sum()));
    }
    for sig in sigs {
        let f = hyperelliptic_exponents(sig).unwrap();
        sums.push((derived_stratum(sig), f.sum()));
    }
    let bad: Vec<String> = sums
        .iter()
        .filter(|(s, sum)| !(denominator_divides(*sum, s) && divides_oracle(*sum, &s.zeros)))
        .map(|(s, sum)| format!("{s}: {sum}"))
        .collect();
    Verdict::new(bad.is_empty(), format!("{} sums; failures: {bad:?}", sums.len()))
}

fn criterion_6(sigs: &[QuadraticSignature]) -> Verdict {
    let mut bad = Vec::new();
    let mut accepted = 0;
    let mut tables = 0;
    for g in 1..=7u32 {
        // every g-subset of 1..=2g-1 containing 1
        let universe: Vec<u32> = (2..2 * g).collect();
        for mask in 0u32..(1 << universe.len()) {
            if mask.count_ones() + 1 != g {
                continue;
            }
            let gaps: BTreeSet<u32> = std::iter::once(1)
                .chain(
                    universe
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &x)| x),
                )
                .collect();
            let closed = (1..=4 * g).filter(|n| !gaps.contains(n)).all(|a| {
                (1..=4 * g - a)
                    .filter(|n| !gaps.contains(n))
                    .all(|b| !gaps.contains(&(a + b)))
            });
            let Ok(gs) = GapSet::new(g, gaps.iter().copied()) else {
                if closed {
                    bad.push(format!("rejected semigroup {gaps:?}"));
                }
                continue;
            };
            accepted += 1;
            let w: u32 = gaps.iter().sum::<u32>() - g * (g + 1) / 2;
            let max = g * (g - 1) / 2;
            let ok = closed
                && gs.gaps().len() == g as usize
                && weight(&gs) == w
                && w <= max
                && ((w == max) == !gaps.contains(&2));
            if !ok {
                bad.push(format!("{gs}"));
            }
            if g >= 2 {
                tables += 1;
                if rank_table_one_point(&gs).validate().is_err() {
                    bad.push(format!("table {gs}"));
                }
            }
        }
    }
    for sig in sigs {
        let rt = rank_table_hyperelliptic(sig);
        tables += 1;
        let top = rt.top();
        if rt.validate().is_err() || !members(&rt).contains(&top) || rt.h0_at(&top) != Some(rt.genus()) {
            bad.push(sig.to_string());
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("{accepted} gap sets (g <= 7), {tables} rank tables monotone; failures: {bad:?}"),
    )
}

fn criterion_7() -> Verdict {
    let mut bad = Vec::new();
    let mut count = 0;
    for g in 3..=5 {
        for row in genus_table(g).unwrap() {
            let Some(sum) = row.sum else { continue };
            count += 1;
            let s = &row.stratum;
            let ok = upper_bound_closed(s).is_ok_and(|b| sum <= b) && cmx_bound(s).is_ok_and(|b| sum <= b);
            if !ok {
                bad.push(s.to_string());
            }
        }
    }
    let four_hyp = validate_stratum(3, &[4], Component::Hyperelliptic).unwrap();
    let equality = cmx_bound(&four_hyp).ok() == Some(r(9, 5));
    Verdict::new(
        bad.is_empty() && equality,
        format!("{count} sums dominated, cmx((4)) = 9/5: {equality}; failures: {bad:?}"),
    )
}

fn criterion_8(sigs: &[QuadraticSignature]) -> Verdict {
    let mut bad = Vec::new();
    for g in ["g=3", "g=4", "g=5"] {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_weierstrass"))
                .args(["table", g, "--format", "csv"])
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
            bad.push(format!("csv {g}"));
        }
    }
    let mut inputs = 0;
    for (g, c) in one_point_cases() {
        inputs += 1;
        let rt = rank_table_one_point(&gaps_one_point(g, c).unwrap());
        if hn_all_exponent_multisets(&rt).map(|s| s.len()).ok() != Some(1) {
            bad.push(format!("g={g} {c}"));
        }
    }
    for sig in sigs.iter().filter(|s| derived_stratum(s).genus <= 5) {
        inputs += 1;
        if hn_all_exponent_multisets(&rank_table_hyperelliptic(sig))
            .map(|s| s.len())
            .ok()
            != Some(1)
        {
            bad.push(sig.to_string());
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("csv byte-identical for g=3,4,5; {inputs} hn inputs choice-independent; failures: {bad:?}"),
    )
}

fn main() -> ExitCode {
    let sigs = signatures();
    let criteria: [(&str, &dyn Fn() -> Verdict); 8] = [
        ("tables reproduced exactly", &criterion_1),
        ("EKZ identity over signatures", &|| criterion_2(&sigs)),
        ("hn_construct agrees with direct routes", &|| criterion_3(&sigs)),
        ("closed bound equals brute force", &criterion_4),
        ("denominator divisibility", &|| criterion_5(&sigs)),
        ("semigroup invariants and monotone tables", &|| criterion_6(&sigs)),
        ("dominance by both bounds", &criterion_7),
        ("determinism", &|| criterion_8(&sigs)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        all &= v.ok;
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!("{status} {}. {name}: {} [{:.2?}]", i + 1, v.detail, start.elapsed());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
