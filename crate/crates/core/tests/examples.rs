use twistkit_core::checks::{run_checks, RunOptions};
use twistkit_core::modelfile::parse_model_file;
use twistkit_core::zoo::{all_examples, skt_non_instanton_control, volume_obstructed};

#[test]
fn every_example_meets_its_recorded_expectations() {
    let mut extra = vec![volume_obstructed()];
    extra.extend([(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(a, b)| skt_non_instanton_control(a, b)));
    for ex in all_examples().into_iter().chain(extra) {
        let reports = run_checks(&ex, &RunOptions::default());
        assert_eq!(reports.len(), ex.checks.len());
        for r in &reports {
            assert!(r.as_expected(), "{}: {} gave {} {:?} {:?}", ex.name, r.check, r.verdict, r.message, r.witnesses);
        }
    }
}

#[test]
fn examples_print_and_parse_back() {
    for ex in all_examples().into_iter().chain([volume_obstructed()]) {
        let text = ex.to_string();
        let parsed = parse_model_file(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", ex.name));
        assert_eq!(parsed, ex, "{}", ex.name);
        assert_eq!(parsed.to_string(), text);
    }
}
