// One-point Weierstrass gap sets with their weights, and the exponent sum
// each determines for `ΩM_g(2g-2)`.

use weierstrass::{gaps_one_point, onesum_from_weight, onesum_max, weight, Component, GapSet};

pub fn run_example() -> weierstrass::Result<()> {
    for g in 2..=5 {
        for c in [Component::Hyperelliptic, Component::Odd, Component::Even] {
            let Ok(gs) = gaps_one_point(g, c) else { continue };
            println!(
                "g={g} {:<4} gaps {:<16} weight {:>2}  sum {}",
                c.short(),
                gs.to_string(),
                weight(&gs),
                onesum_from_weight(g, &gs)
            );
        }
        println!("g={g} max sum {}", onesum_max(g));
    }

    // any numerical semigroup of genus g works as input
    let ordinary = GapSet::new(4, [1, 2, 3, 4])?;
    println!(
        "ordinary g=4: weight {}, non-gaps {:?}",
        weight(&ordinary),
        ordinary.non_gaps_up_to(8)
    );
    match GapSet::new(3, [1, 3, 4]) {
        Err(e) => println!("rejected {{1,3,4}}: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("gap set example");
}
