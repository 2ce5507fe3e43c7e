mod common;

#[test]
fn classical_rows_ranks_two_to_six() {
    let checked = common::degree_checks().unwrap();
    assert!(checked > 50, "{checked}");
}
