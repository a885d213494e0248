use serde_json::json;
use weierstrass::{
    ekz_sum, gaps_one_point, hn_construct, rank_table_hyperelliptic, rank_table_one_point, Component, Error,
    QuadraticSignature, RankTable,
};

fn golden() -> serde_json::Value {
    serde_json::from_str(include_str!("golden/rank_table_1_1.json")).unwrap()
}

#[test]
fn hyperelliptic_table_matches_golden() {
    let sig: QuadraticSignature = "1,1,-1x6".parse().unwrap();
    assert_eq!(rank_table_hyperelliptic(&sig).to_json(), golden());
}

#[test]
fn json_round_trip_preserves_the_filtration() {
    let rt = RankTable::from_json(&golden()).unwrap();
    assert_eq!(rt.bounds(), &[2, 2]);
    assert_eq!(rt.genus(), 3);
    let hn = hn_construct(&rt).unwrap();
    let sig: QuadraticSignature = "1,1,-1x6".parse().unwrap();
    assert_eq!(hn.sum(), ekz_sum(&sig));
    assert_eq!(hn.sum().to_string(), "5/3");

    let one_point = rank_table_one_point(&gaps_one_point(4, Component::Even).unwrap());
    let back = RankTable::from_json(&one_point.to_json()).unwrap();
    assert_eq!(back, one_point);
}

#[test]
fn malformed_tables_are_rejected() {
    let mut dup = golden();
    dup["values"][1] = dup["values"][0].clone();
    assert!(matches!(RankTable::from_json(&dup), Err(Error::InvalidRankTable(_))));

    let mut missing = golden();
    missing["values"].as_array_mut().unwrap().pop();
    assert!(matches!(
        RankTable::from_json(&missing),
        Err(Error::InvalidRankTable(_))
    ));

    let mut jump = golden();
    let last = jump["values"].as_array().unwrap().len() - 1;
    jump["values"][last]["h0"] = json!(5);
    assert!(matches!(RankTable::from_json(&jump), Err(Error::InvalidRankTable(_))));

    let outside = json!({"box": [1], "values": [{"d": [-1], "h0": 0}, {"d": [0], "h0": 1}, {"d": [2], "h0": 1}]});
    assert!(RankTable::from_json(&outside).is_err());
    assert!(RankTable::from_json(&json!({"values": []})).is_err());
}
