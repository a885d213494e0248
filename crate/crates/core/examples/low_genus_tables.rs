// Genus 3, 4 and 5 tables rendered as text, CSV and JSON.

use weierstrass::{genus_table, render_table, OutputFormat};

pub fn run_example() -> weierstrass::Result<()> {
    for g in 3..=5 {
        let rows = genus_table(g)?;
        print!("{}", render_table(g, &rows, OutputFormat::Text, false));
        println!();
    }
    let rows = genus_table(3)?;
    print!("{}", render_table(3, &rows, OutputFormat::Csv, true));
    let json = render_table(3, &rows[..1], OutputFormat::Json, false);
    println!("{}", json.lines().take(12).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("table example");
}
