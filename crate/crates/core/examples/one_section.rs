// Weierstrass filtration of `ΩM_g(2g-2)` read off the one-point gap set,
// checked against the level recursion on the same rank table.

use weierstrass::{gaps_one_point, hn_construct, one_section_exponents, rank_table_one_point, Component};

pub fn run_example() -> weierstrass::Result<()> {
    for (g, c) in [(3, Component::Odd), (4, Component::Even), (5, Component::Hyperelliptic)] {
        let f = one_section_exponents(g, c)?;
        println!("({}) {c}", 2 * g - 2);
        for step in &f.steps {
            println!(
                "  {:<16} degree {:>5}  exponent {}",
                step.label.to_string(),
                step.degree.to_string(),
                step.exponent()
            );
        }
        println!("  sum {}  splits {}", f.sum(), f.splits);

        let hn = hn_construct(&rank_table_one_point(&gaps_one_point(g, c)?))?;
        assert_eq!(hn.exponents, f.exponents);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("one-section example");
}
