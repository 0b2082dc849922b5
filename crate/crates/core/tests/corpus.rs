use std::path::PathBuf;

use modcomp::trs_io::{parse_trs, print_trs};

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "trs")).collect();
    files.sort();
    files.into_iter().map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())).collect()
}

#[test]
fn corpus_has_at_least_twelve_systems() {
    assert!(corpus().len() >= 12);
}

#[test]
fn printing_then_parsing_is_the_identity() {
    for (name, text) in corpus() {
        let rel = parse_trs(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print_trs(&rel);
        let again = parse_trs(&printed).unwrap_or_else(|e| panic!("{name} reprinted: {e}"));
        assert_eq!(again, rel, "{name}");
        assert_eq!(print_trs(&again), printed, "{name}");
    }
}

#[test]
fn rule_counts() {
    let expected = [
        ("ag01_4_21", 4, 0),
        ("bits", 5, 0),
        ("bouchare_06_12", 3, 0),
        ("cg_gap", 2, 0),
        ("ex16_luc06", 7, 0),
        ("ffg_rel", 1, 1),
        ("gap_exp", 2, 0),
        ("hofbauer_r2", 3, 0),
        ("hofbauer_rel", 1, 3),
        ("hofbauer_union", 4, 0),
        ("rev", 3, 0),
        ("rev_append", 5, 0),
        ("rev_rel", 1, 2),
        ("sk90_4_30", 6, 0),
        ("swap_eq", 2, 0),
        ("z086", 3, 0),
    ];
    let systems = corpus();
    for (name, strict, weak) in expected {
        let (_, text) = systems.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("{name} missing"));
        let rel = parse_trs(text).unwrap();
        assert_eq!((rel.strict.len(), rel.weak.len()), (strict, weak), "{name}");
    }
}
