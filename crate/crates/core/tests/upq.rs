use hua_core::liedata::{realform, RealForm};
use hua_core::matop::{upq_ideal_generators, GeneratorSet, GeneratorSetJson, IdealOptions};
use hua_core::minpoly::ScheduleVariant;
use hua_core::reduce::{reduce_generator_set, upq_theorem, UpqTheoremOptions};

fn cases() -> Vec<(usize, usize, Vec<usize>)> {
    vec![(1, 1, vec![1]), (2, 1, vec![1]), (2, 2, vec![1, 2]), (2, 2, vec![2])]
}

#[test]
fn schedule_shifted_by_q_fails() {
    for (p, q, b) in cases() {
        let opts = UpqTheoremOptions { schedule: ScheduleVariant::ShiftedByQ, ..Default::default() };
        assert!(!upq_theorem(p, q, &b, opts).unwrap().pass, "{p},{q};{b:?}");
    }
}

#[test]
fn plain_f_on_full_matrix_fails_when_p_exceeds_q() {
    let opts = UpqTheoremOptions { plain_f: true, restrict_columns: Some(false), ..Default::default() };
    assert!(!upq_theorem(2, 1, &[1], opts).unwrap().pass);
}

#[test]
fn generator_json_round_trip_reduces_to_zero() {
    for (p, q, b) in cases() {
        let form = realform(RealForm::Upq { p, q }).unwrap();
        let opts = IdealOptions { restrict_columns: p > q };
        let gens = upq_ideal_generators(&form, &b, opts).unwrap();
        let text = serde_json::to_string(&gens.to_json()).unwrap();
        let back: GeneratorSetJson = serde_json::from_str(&text).unwrap();
        let back = GeneratorSet::from_json(&back).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        let r = reduce_generator_set(&back).unwrap();
        assert!(r.pass, "{p},{q};{b:?}: {:?}", r.failures().collect::<Vec<_>>());
    }
}
