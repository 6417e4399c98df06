use std::fs;
use std::time::Instant;

use dashu::integer::IBig;
use proptest::prelude::*;
use ptcubic_core::perturbation::{
    compute_coefficients, read_cache, write_cache, PerturbationError, RecursionState,
};

const REFERENCE_COEFFICIENTS: [&str; 20] = [
    "11",
    "-930",
    "158836",
    "-38501610",
    "11777967516",
    "-4300048271460",
    "1815215203378344",
    "-868277986898581530",
    "464025598165231889260",
    "-274145574452876905074540",
    "177549419941607942489064216",
    "-125174233315525265299874890500",
    "95490636687662293430130201941400",
    "-78410748996991270671939611723389320",
    "68982408758305101330092396215438198608",
    "-64750700102454900598854145411501140103290",
    "64606224564767863138999679663986778514033420",
    "-68291871149169980983310351232642663615057109020",
    "76244729314392095958565433992857306551429203990968",
    "-89660576791390730762095201994590409692301843683859820",
];

#[test]
fn first_twenty_match_reference_exactly() {
    let start = Instant::now();
    let series = compute_coefficients(20).unwrap();
    let elapsed = start.elapsed();
    let reference: Vec<String> = series.coefficients().iter().map(|b| b.to_string()).collect();
    assert_eq!(reference, REFERENCE_COEFFICIENTS);
    assert!(elapsed.as_secs_f64() < 1.0, "order 20 took {elapsed:?}");
}

#[test]
fn order_ten_last_coefficient() {
    let series = compute_coefficients(10).unwrap();
    assert_eq!(
        series.b(10).unwrap().to_string(),
        "-274145574452876905074540"
    );
}

#[test]
fn order_46_round_trips_through_cache() {
    let start = Instant::now();
    let series = compute_coefficients(46).unwrap();
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert!(series.b(46).unwrap().to_string().len() > 100);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b46.cache");
    write_cache(&series, &path).unwrap();
    assert_eq!(read_cache(&path).unwrap(), series);

    // Byte-identical output from an independent second run.
    let again = dir.path().join("again.cache");
    write_cache(&compute_coefficients(46).unwrap(), &again).unwrap();
    assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn cache_loads_fifth_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1.cache");
    let mut text = String::from("bncache v1 p2+x2/4+i*l*x3\n");
    for (i, b) in REFERENCE_COEFFICIENTS.iter().enumerate() {
        text.push_str(&format!("{}\t{}\n", i + 1, b));
    }
    fs::write(&path, text).unwrap();
    let series = read_cache(&path).unwrap();
    assert_eq!(series.b(5), Some(&IBig::from(11777967516u64)));
}

#[test]
fn one_byte_sign_mutation_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.cache");
    write_cache(&compute_coefficients(4).unwrap(), &path).unwrap();
    let text = fs::read_to_string(&path).unwrap().replace("2\t-930", "2\t+930");
    fs::write(&path, text).unwrap();
    assert!(matches!(
        read_cache(&path),
        Err(PerturbationError::SignAlternation { n: 2 })
    ));
}

#[test]
fn odd_orders_vanish_through_order_60() {
    let mut state = RecursionState::new();
    for _ in 0..60 {
        state.advance();
    }
    for k in (1..=60).step_by(2) {
        assert!(state.energy(k).unwrap().is_zero(), "E_{k} != 0");
    }
    for k in (2..=60).step_by(2) {
        assert!(state.energy(k).unwrap().is_int(), "E_{k} not integral");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prefix_stable_and_alternating(order in 0usize..30) {
        let series = compute_coefficients(order).unwrap();
        let longer = compute_coefficients(order + 3).unwrap();
        prop_assert_eq!(series.coefficients(), &longer.coefficients()[..order]);
        for (i, b) in longer.coefficients().iter().enumerate() {
            let positive = *b > IBig::ZERO;
            prop_assert_eq!(positive, i % 2 == 0);
        }
    }
}
