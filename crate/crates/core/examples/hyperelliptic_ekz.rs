// Hyperelliptic loci from quadratic signatures. The lifted filtration's
// exponent sum must equal the EKZ value.

use weierstrass::{derived_stratum, ekz_sum, hyperelliptic_exponents, QuadraticSignature};

pub fn run_example() -> weierstrass::Result<()> {
    for text in [
        "6,-1x10",
        "3,-1x7",
        "2,1,-1x7",
        "1,1,1,1,-1x8",
        "4,2,-1x10",
        "5,1,-1x10",
    ] {
        let sig: QuadraticSignature = text.parse()?;
        let f = hyperelliptic_exponents(&sig)?;
        let s = derived_stratum(&sig);
        let exps: Vec<String> = f.exponents.iter().map(ToString::to_string).collect();
        println!(
            "{sig:<14} -> {s}\n  exponents [{}]  sum {}  EKZ {}",
            exps.join(", "),
            f.sum(),
            ekz_sum(&sig)
        );
        assert_eq!(f.sum(), ekz_sum(&sig));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("hyperelliptic example");
}
