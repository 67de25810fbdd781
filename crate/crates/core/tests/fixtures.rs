use std::path::PathBuf;

use qgame_core::bayes::BayesSpec;
use qgame_core::game::{load_game, save_game, GameTable};
use qgame_core::Error;

fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games")
}

#[test]
fn shipped_tables_match_builtins() {
    let pd = load_game(games_dir().join("prisoners_dilemma.json")).unwrap();
    assert_eq!(pd, GameTable::prisoners_dilemma());
    assert_eq!(pd.u1[0][0], -4.0);
    let da = load_game(games_dir().join("da_brother.json")).unwrap();
    assert_eq!(da, GameTable::da_brother());
}

#[test]
fn shipped_bayes_spec_loads() {
    let spec = BayesSpec::load(games_dir().join("da_brother_bayes.json")).unwrap();
    assert_eq!(spec, BayesSpec::da_brother(0.1).unwrap());
}

#[test]
fn save_then_load_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let g = GameTable::new("odd", [[0.1, -1e-300], [3.5, 1e10]], [[-0.0, 2.0], [7.25, -9.0]]).unwrap();
    save_game(&g, &path).unwrap();
    assert_eq!(load_game(&path).unwrap(), g);
}

#[test]
fn malformed_files_name_the_field() {
    let bad = r#"{"name": "x", "u1": [[0, 1], [2]], "u2": [[0, 0], [0, 0]]}"#;
    match GameTable::from_json_str(bad) {
        Err(Error::Field { field, .. }) => assert_eq!(field, "u1[1]"),
        other => panic!("{other:?}"),
    }
    let bad = r#"{"name": "x", "u1": [[0, 1], [2, 3]], "u2": [[0, "a"], [0, 0]]}"#;
    match GameTable::from_json_str(bad) {
        Err(Error::Field { field, .. }) => assert_eq!(field, "u2[0][1]"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(GameTable::from_json_str("{"), Err(Error::Json(_))));
    assert!(matches!(load_game("/nonexistent/g.json"), Err(Error::Io { .. })));
}
