// Closed and brute-force upper bounds on exponent sums over every partition
// of `2g - 2`, next to the CMX bound.

use weierstrass::{cmx_bound, upper_bound_bruteforce_detail, upper_bound_closed, validate_stratum, Component};

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|p| {
            partitions(n - p, p).into_iter().map(move |mut rest| {
                rest.insert(0, p);
                rest
            })
        })
        .collect()
}

pub fn run_example() -> weierstrass::Result<()> {
    let g = 4;
    println!("{:<16} {:>6} {:>6} {:>6}  minimizer", "zeros", "closed", "brute", "cmx");
    for zeros in partitions(2 * g - 2, 2 * g - 2) {
        let s = validate_stratum(g, &zeros, Component::Unspecified)?;
        let closed = upper_bound_closed(&s)?;
        let brute = upper_bound_bruteforce_detail(&s)?;
        assert_eq!(closed, brute.bound);
        println!(
            "{:<16} {:>6} {:>6} {:>6}  {:?}",
            format!("{zeros:?}"),
            closed.to_string(),
            brute.bound.to_string(),
            cmx_bound(&s)?.to_string(),
            brute.minimizer
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("bounds example");
}
