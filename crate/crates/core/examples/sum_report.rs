// A full report for one stratum, as the library API and as the CLI prints
// it in JSON.

use weierstrass::{low_genus_exponents, run_cli, validate_stratum, Component, Subject, SumReport};

pub fn run_example() -> weierstrass::Result<()> {
    let s = validate_stratum(4, &[4, 2], Component::Even)?;
    let f = low_genus_exponents(&s)?;
    let report = SumReport::new(Subject::Stratum(s), &f);
    println!(
        "sum {} closed {:?} cmx {:?} kappa {} denominators ok {}",
        report.sum,
        report.bound_closed.map(|b| b.to_string()),
        report.bound_cmx.map(|b| b.to_string()),
        report.kappa,
        report.denominator_ok
    );
    println!("L - kappa = {} (times 3/pi^2 gives c_area)", report.c_area_scaled());

    let args: Vec<String> = ["exponents", "g=4", "zeros=4+2", "component=even", "--format", "json"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (code, out) = run_cli(&args);
    assert_eq!(code, 0);
    print!("{out}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("report example");
}
