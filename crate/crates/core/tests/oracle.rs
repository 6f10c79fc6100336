use pi_core::agm::salamin_brent_pi;
use pi_core::apnum::{make_context, to_decimal};
use pi_core::verify::{correct_digits, machin_pi};

#[test]
fn oracle_is_stable_under_doubled_precision() {
    for d in [50u64, 500, 5000] {
        let lo = machin_pi(&make_context(d).unwrap());
        let hi = machin_pi(&make_context(2 * d).unwrap());
        assert_eq!(
            to_decimal(&lo, d).unwrap(),
            to_decimal(&hi, 2 * d).unwrap()[..d as usize + 1]
        );
    }
}

#[test]
fn oracle_and_salamin_brent_agree_at_one_thousand_digits() {
    let c = make_context(1000).unwrap();
    let sb = salamin_brent_pi(&c).unwrap();
    assert!(correct_digits(&sb.pi, &machin_pi(&c)).unwrap() >= 1000);
    let short = salamin_brent_pi(&make_context(100).unwrap()).unwrap();
    assert!(sb.estimates.len().abs_diff(short.estimates.len()) <= 4);
}

#[test]
fn cubic_run_to_agreement() -> pi_core::Result<()> {
    use pi_core::borwein::AlgorithmId;
    use pi_core::driver;

    let ctx = make_context(1000)?;
    let run = driver::compute(AlgorithmId::Cubic, &ctx)?;
    assert!(correct_digits(&run.pi, &machin_pi(&ctx))? >= 1000);
    assert_eq!(to_decimal(&run.pi, 30)?, "3.14159265358979323846264338328");
    Ok(())
}
