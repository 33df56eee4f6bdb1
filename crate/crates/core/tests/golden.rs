use std::path::PathBuf;

use twistkit_core::modelfile::parse_model_file;
use twistkit_core::zoo::make_example;

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn shipped_model_files_match_the_registry() {
    let mut seen = 0;
    for entry in std::fs::read_dir(models_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("model") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_model_file(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let expected = make_example(&parsed.name).unwrap();
        assert_eq!(parsed, expected, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 8, "only {seen} model files");
}

#[test]
fn halfline_file_is_the_registry_example() {
    let text = std::fs::read_to_string(models_dir().join("halfline_t3.model")).unwrap();
    let parsed = parse_model_file(&text).unwrap();
    assert_eq!(parsed, make_example("halfline_t3").unwrap());
    assert_eq!(parsed.model.nonzero(), ["x0".to_string()]);
}
