// The level recursion over a rank table read back from JSON, with every
// branch choice explored.

use weierstrass::{
    hn_all_exponent_multisets, hn_construct, members, rank_table_hyperelliptic, QuadraticSignature, RankTable,
};

pub fn run_example() -> weierstrass::Result<()> {
    let sig: QuadraticSignature = "2,2,-1x8".parse()?;
    let rt = rank_table_hyperelliptic(&sig);
    let json = serde_json::to_string(&rt.to_json()).expect("json");
    println!("table for {sig}: box {:?}, {} bytes of JSON", rt.bounds(), json.len());

    let back = RankTable::from_json(&serde_json::from_str(&json).expect("json"))?;
    let ms: Vec<String> = members(&back).iter().map(ToString::to_string).collect();
    println!("members {}", ms.join(" "));

    let hn = hn_construct(&back)?;
    for step in &hn.steps {
        println!("  {:<20} exponent {}", step.label.to_string(), step.exponent());
    }
    let all = hn_all_exponent_multisets(&back)?;
    println!(
        "sum {}; {} exponent multiset(s) over all branch choices",
        hn.sum(),
        all.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("recursion example");
}
